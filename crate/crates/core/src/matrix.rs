//! Dense GF(2) parity-check matrices and the text format that carries them.
//!
//! A matrix has `r` check rows and `n` columns with `r < n <= 128`. Column
//! `j` (1-based) read top to bottom gives the syndrome produced by a single
//! error at codeword position `j`.
//!
//! Text format: a header line `"n k"`, then `n - k` rows of `n` binary
//! digits (single spaces between digits allowed). Lines whose first
//! non-blank character is `#` are comments.

use crate::bits::{BitVec, MAX_LEN};
use crate::error::{Gf2Error, ParseError};

/// A dense r x n parity-check matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    /// Row bit masks: row `i` bit `j-1` is the entry at (i, j).
    rows: Vec<u128>,
    n: usize,
}

impl CheckMatrix {
    /// Builds a matrix from its rows. All rows must share one length, and
    /// there must be fewer rows than columns.
    pub fn from_rows(rows: &[BitVec]) -> Result<Self, ParseError> {
        let r = rows.len();
        let n = rows.first().map(|v| v.len()).unwrap_or(0);
        if r == 0 || r >= n {
            return Err(ParseError::BadDimensions { n, k: n.saturating_sub(r) });
        }
        if n > MAX_LEN {
            return Err(ParseError::TooWide { n });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ParseError::RaggedRow { line: i + 2, expected: n, got: row.len() });
            }
        }
        Ok(CheckMatrix { rows: rows.iter().map(|v| v.word()).collect(), n })
    }

    /// Builds a matrix from its columns (each of length `r`).
    pub fn from_columns(cols: &[BitVec]) -> Result<Self, ParseError> {
        let n = cols.len();
        let r = cols.first().map(|v| v.len()).unwrap_or(0);
        if r == 0 || r >= n {
            return Err(ParseError::BadDimensions { n, k: n.saturating_sub(r) });
        }
        if n > MAX_LEN {
            return Err(ParseError::TooWide { n });
        }
        let mut rows = vec![0u128; r];
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "column {} has length {}, expected {r}", j + 1, col.len());
            for i in 1..=r {
                if col.get(i) {
                    rows[i - 1] |= 1u128 << j;
                }
            }
        }
        Ok(CheckMatrix { rows, n })
    }

    /// Number of check rows `r`.
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Code length `n` (number of columns).
    pub fn cols(&self) -> usize {
        self.n
    }

    /// Information length `k = n - r`.
    pub fn k(&self) -> usize {
        self.n - self.rows.len()
    }

    /// Entry at row `i`, column `j` (both 1-based).
    pub fn bit(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && i <= self.rows(), "row {i} out of 1..={}", self.rows());
        assert!(j >= 1 && j <= self.n, "column {j} out of 1..={}", self.n);
        (self.rows[i - 1] >> (j - 1)) & 1 == 1
    }

    /// Column `j` (1-based), top row first.
    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_word(self.rows(), self.column_word(j))
    }

    /// Row `i` (1-based) as a length-`n` vector.
    pub fn row(&self, i: usize) -> BitVec {
        assert!(i >= 1 && i <= self.rows(), "row {i} out of 1..={}", self.rows());
        BitVec::from_word(self.n, self.rows[i - 1])
    }

    /// Column `j` packed with row `i` at word bit `i - 1`.
    pub(crate) fn column_word(&self, j: usize) -> u128 {
        assert!(j >= 1 && j <= self.n, "column {j} out of 1..={}", self.n);
        let mut w = 0u128;
        for (i, row) in self.rows.iter().enumerate() {
            w |= ((row >> (j - 1)) & 1) << i;
        }
        w
    }

    /// Syndrome of `word`: bit `i` is the parity of the row-`i` positions of
    /// `word`. Errors if `word` is not `n` bits long.
    pub fn mul_vec(&self, word: &BitVec) -> Result<BitVec, Gf2Error> {
        if word.len() != self.n {
            return Err(Gf2Error::LengthMismatch { expected: self.n, got: word.len() });
        }
        let mut s = 0u128;
        for (i, row) in self.rows.iter().enumerate() {
            s |= (((row & word.word()).count_ones() & 1) as u128) << i;
        }
        Ok(BitVec::from_word(self.rows(), s))
    }

    /// Parses the text format. Trailing non-comment content is an error; use
    /// [`crate::code::CodeFile::parse`] for files that carry layout and
    /// capability lines after the matrix.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let (matrix, rest) = Self::parse_prefix(text)?;
        if let Some((line, content)) = rest.into_iter().next() {
            return Err(ParseError::TrailingContent { line, found: content });
        }
        Ok(matrix)
    }

    /// Parses a matrix from the start of `text`, returning any remaining
    /// content lines as `(line_number, text)` pairs.
    pub(crate) fn parse_prefix(text: &str) -> Result<(Self, Vec<(usize, String)>), ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(ParseError::BadHeader {
            line: 1,
            found: String::new(),
        })?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::BadHeader { line: header_line, found: header.to_string() })?;
        let k: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::BadHeader { line: header_line, found: header.to_string() })?;
        if parts.next().is_some() {
            return Err(ParseError::BadHeader { line: header_line, found: header.to_string() });
        }
        if k == 0 || k >= n {
            return Err(ParseError::BadDimensions { n, k });
        }
        if n > MAX_LEN {
            return Err(ParseError::TooWide { n });
        }

        let r = n - k;
        let mut rows = Vec::with_capacity(r);
        for _ in 0..r {
            let (line, content) = lines.next().ok_or(ParseError::MissingRows {
                expected: r,
                got: rows.len(),
            })?;
            let mut word = 0u128;
            let mut count = 0usize;
            for c in content.chars() {
                match c {
                    '0' => count += 1,
                    '1' => {
                        if count < MAX_LEN {
                            word |= 1u128 << count;
                        }
                        count += 1;
                    }
                    c if c.is_whitespace() => {}
                    c => return Err(ParseError::NotABit { line, value: c }),
                }
            }
            if count != n {
                return Err(ParseError::RaggedRow { line, expected: n, got: count });
            }
            rows.push(word);
        }

        let rest = lines.map(|(i, l)| (i, l.to_string())).collect();
        Ok((CheckMatrix { rows, n }, rest))
    }

    /// Renders the text format. `parse(render(h)) == h`.
    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k());
        for i in 1..=self.rows() {
            out.push_str(&self.row(i).to_string());
            out.push('\n');
        }
        out
    }

    /// Positions (1-based, ascending) of the leftmost maximal set of linearly
    /// independent columns, as found by Gaussian elimination.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut basis: Vec<u128> = Vec::new();
        let mut pivots = Vec::new();
        for j in 1..=self.n {
            let mut v = self.column_word(j);
            for b in &basis {
                let lead = 127 - b.leading_zeros();
                if (v >> lead) & 1 == 1 {
                    v ^= b;
                }
            }
            if v != 0 {
                basis.push(v);
                basis.sort_by_key(|b| std::cmp::Reverse(*b));
                pivots.push(j);
                if pivots.len() == self.rows() {
                    break;
                }
            }
        }
        pivots
    }

    /// Solves the check equations for the parity bits: with parity bit `t`
    /// stored at column `parity_positions[t-1]` and info bit `t` at the
    /// `t`-th remaining column (ascending), returns the r x k map `A` with
    /// `parity = A * info`, row `t` packed with info bit `u` at word bit
    /// `u - 1`. `None` if the parity columns are linearly dependent.
    pub(crate) fn solve_parity_map(&self, parity_positions: &[usize]) -> Option<Vec<u128>> {
        let r = self.rows();
        let n = self.n;
        assert_eq!(parity_positions.len(), r);
        let info_positions: Vec<usize> =
            (1..=n).filter(|p| !parity_positions.contains(p)).collect();
        let k = info_positions.len();

        // Augmented rows: [parity part | info part] of each check equation.
        let mut par = vec![0u128; r];
        let mut inf = vec![0u128; r];
        for i in 1..=r {
            for (t, &p) in parity_positions.iter().enumerate() {
                if self.bit(i, p) {
                    par[i - 1] |= 1u128 << t;
                }
            }
            for (u, &p) in info_positions.iter().enumerate() {
                if self.bit(i, p) {
                    inf[i - 1] |= 1u128 << u;
                }
            }
        }

        // Gauss-Jordan on the parity part.
        for t in 0..r {
            let pivot = (t..r).find(|&i| (par[i] >> t) & 1 == 1)?;
            par.swap(t, pivot);
            inf.swap(t, pivot);
            for i in 0..r {
                if i != t && (par[i] >> t) & 1 == 1 {
                    par[i] ^= par[t];
                    inf[i] ^= inf[t];
                }
            }
        }
        debug_assert!(par.iter().enumerate().all(|(t, &row)| row == 1u128 << t));
        let _ = k;
        Some(inf)
    }
}

impl std::fmt::Debug for CheckMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CheckMatrix({}x{})", self.rows(), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CodeSpec;
    use proptest::prelude::*;

    fn fig1() -> CheckMatrix {
        CodeSpec::builtin_2316().matrix().clone()
    }

    #[test]
    fn fig1_column_one_reads_top_to_bottom() {
        let h = fig1();
        assert_eq!(h.column(1).to_string(), "0001000");
        assert_eq!(h.rows(), 7);
        assert_eq!(h.cols(), 23);
    }

    #[test]
    fn syndrome_of_stored_codeword_is_zero() {
        let h = fig1();
        let c: BitVec = "01111111011110111010111".parse().unwrap();
        assert!(h.mul_vec(&c).unwrap().is_zero());
        let zero = BitVec::zeros(23).unwrap();
        assert!(h.mul_vec(&zero).unwrap().is_zero());
    }

    #[test]
    fn triple_adjacent_flip_reproduces_the_worked_syndrome() {
        let h = fig1();
        let mut c: BitVec = "01111111011110111010111".parse().unwrap();
        for pos in [4, 5, 6] {
            c.flip(pos);
        }
        assert_eq!(h.mul_vec(&c).unwrap().to_string(), "1011101");

        // Same value as the column XOR it decomposes into.
        let s = h
            .column(4)
            .xor(&h.column(5))
            .unwrap()
            .xor(&h.column(6))
            .unwrap();
        assert_eq!(s.to_string(), "1011101");
    }

    #[test]
    fn mul_vec_rejects_wrong_length() {
        let h = fig1();
        let w = BitVec::zeros(22).unwrap();
        assert!(matches!(h.mul_vec(&w), Err(Gf2Error::LengthMismatch { expected: 23, got: 22 })));
    }

    #[test]
    fn parse_small_matrix() {
        let h = CheckMatrix::parse("3 1\n101\n0 1 1\n").unwrap();
        assert_eq!(h.rows(), 2);
        assert_eq!(h.cols(), 3);
        assert!(h.bit(1, 1) && !h.bit(1, 2) && h.bit(1, 3));
        assert!(h.bit(2, 2) && h.bit(2, 3));
    }

    #[test]
    fn parse_reports_ragged_row_with_line_number() {
        let text = "23 16\n".to_string() + &"0".repeat(22) + "\n";
        match CheckMatrix::parse(&text) {
            Err(ParseError::RaggedRow { line: 2, expected: 23, got: 22 }) => {}
            other => panic!("expected ragged-row error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_bad_inputs() {
        assert!(matches!(
            CheckMatrix::parse("3 1\n1x1\n011\n"),
            Err(ParseError::NotABit { line: 2, value: 'x' })
        ));
        assert!(matches!(
            CheckMatrix::parse("3 0\n111\n111\n111\n"),
            Err(ParseError::BadDimensions { n: 3, k: 0 })
        ));
        assert!(matches!(CheckMatrix::parse("200 100\n"), Err(ParseError::TooWide { n: 200 })));
        assert!(matches!(
            CheckMatrix::parse("# only a comment\n"),
            Err(ParseError::BadHeader { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let h = CheckMatrix::parse("# a comment\n\n3 1\n# another\n101\n011\n").unwrap();
        assert_eq!(h.cols(), 3);
    }

    #[test]
    fn fig1_renders_and_round_trips() {
        let h = fig1();
        let again = CheckMatrix::parse(&h.render()).unwrap();
        assert_eq!(h, again);
    }

    #[test]
    fn unit_vector_multiplication_reads_columns() {
        let h = fig1();
        for j in 1..=23 {
            let e = BitVec::unit(23, j).unwrap();
            assert_eq!(h.mul_vec(&e).unwrap(), h.column(j), "column {j}");
        }
    }

    #[test]
    fn pivot_columns_are_independent_and_leftmost() {
        // Identity-fronted matrix pivots on its identity columns.
        let h = CheckMatrix::parse("5 3\n10110\n01011\n").unwrap();
        assert_eq!(h.pivot_columns(), vec![1, 2]);
        // Lead column repeated: pivot skips the duplicate.
        let h = CheckMatrix::parse("5 3\n11010\n00111\n").unwrap();
        assert_eq!(h.pivot_columns(), vec![1, 3]);
    }

    proptest! {
        // mul_vec(H, a ^ b) == mul_vec(H, a) ^ mul_vec(H, b)
        #[test]
        fn multiplication_is_linear(
            rows in proptest::collection::vec(any::<u128>(), 1..=6),
            a in any::<u128>(),
            b in any::<u128>(),
            n in 7usize..=12,
        ) {
            let rows: Vec<BitVec> = rows.iter().map(|&w| BitVec::from_word(n, w)).collect();
            let h = CheckMatrix::from_rows(&rows).unwrap();
            let a = BitVec::from_word(n, a);
            let b = BitVec::from_word(n, b);
            let lhs = h.mul_vec(&a.xor(&b).unwrap()).unwrap();
            let rhs = h.mul_vec(&a).unwrap().xor(&h.mul_vec(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn render_parse_round_trip(
            rows in proptest::collection::vec(any::<u128>(), 1..=7),
            n in 8usize..=30,
        ) {
            let rows: Vec<BitVec> = rows.iter().map(|&w| BitVec::from_word(n, w)).collect();
            let h = CheckMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(CheckMatrix::parse(&h.render()).unwrap(), h);
        }
    }
}
