//! Contiguous error patterns (bursts of width 1..=3, plus wider probe bursts).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;

/// A run of flipped bits: `width` consecutive positions starting at `start` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErrorSpan {
    pub start: usize,
    pub width: usize,
}

impl ErrorSpan {
    pub fn new(start: usize, width: usize) -> Self {
        assert!(start >= 1 && width >= 1, "spans are 1-based and non-empty");
        ErrorSpan { start, width }
    }

    /// Last covered position.
    pub fn end(&self) -> usize {
        self.start + self.width - 1
    }

    pub fn covers(&self, pos: usize) -> bool {
        pos >= self.start && pos <= self.end()
    }

    /// The pattern as a length-`n` vector with the span bits set.
    pub fn to_bitvec(&self, n: usize) -> BitVec {
        assert!(self.end() <= n, "span {self} does not fit in {n} bits");
        let mut v = BitVec::zeros(n).expect("valid length");
        for pos in self.start..=self.end() {
            v.set(pos, true);
        }
        v
    }

    /// All spans of width 1..=`max_width` inside `n` positions, ordered by
    /// (width, start). This is the canonical scan order for witnesses and
    /// syndrome tables.
    pub fn enumerate(n: usize, max_width: usize) -> impl Iterator<Item = ErrorSpan> {
        (1..=max_width).flat_map(move |width| {
            (1..=n.saturating_sub(width - 1)).map(move |start| ErrorSpan { start, width })
        })
    }
}

impl fmt::Display for ErrorSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = match self.width {
            1 => "single",
            2 => "double",
            3 => "triple",
            _ => "burst",
        };
        if self.width == 1 {
            write!(f, "{class}({})", self.start)
        } else {
            write!(f, "{class}({}..{})", self.start, self.end())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_match_class_sizes() {
        // 23 singles + 22 adjacent doubles + 21 adjacent triples = 66 patterns.
        assert_eq!(ErrorSpan::enumerate(23, 3).count(), 66);
        assert_eq!(ErrorSpan::enumerate(23, 1).count(), 23);
        // Width classes vanish when the word is too short.
        assert_eq!(ErrorSpan::enumerate(2, 3).count(), (2 + 1));
        assert_eq!(ErrorSpan::enumerate(1, 3).count(), 1);
    }

    #[test]
    fn enumeration_is_weight_then_start_ordered() {
        let spans: Vec<_> = ErrorSpan::enumerate(3, 2).collect();
        assert_eq!(
            spans,
            vec![
                ErrorSpan::new(1, 1),
                ErrorSpan::new(2, 1),
                ErrorSpan::new(3, 1),
                ErrorSpan::new(1, 2),
                ErrorSpan::new(2, 2),
            ]
        );
    }

    #[test]
    fn bitvec_form_sets_exactly_the_span() {
        let v = ErrorSpan::new(4, 3).to_bitvec(23);
        assert_eq!(v.ones(), vec![4, 5, 6]);
    }

    #[test]
    fn display_names_the_width_class() {
        assert_eq!(ErrorSpan::new(7, 1).to_string(), "single(7)");
        assert_eq!(ErrorSpan::new(3, 2).to_string(), "double(3..4)");
        assert_eq!(ErrorSpan::new(4, 3).to_string(), "triple(4..6)");
        assert_eq!(ErrorSpan::new(2, 5).to_string(), "burst(2..6)");
    }
}
