//! Design-constraint checks for adjacent-error-correcting check matrices.
//!
//! A matrix supports unambiguous correction of a pattern class exactly when
//! every pattern in the class maps to a distinct non-zero syndrome:
//!
//! * SEC: all columns non-zero and pairwise distinct.
//! * DAEC: additionally, adjacent-pair sums are non-zero and the whole set
//!   {singles} ∪ {adjacent pairs} is collision free.
//! * TAEC: additionally, adjacent-triple sums are non-zero and the whole set
//!   {singles} ∪ {pairs} ∪ {triples} is collision free.
//!
//! The three flags come from this full uniqueness check. The weaker
//! conditions usually quoted for these codes — pair sums distinct from
//! columns, triple sums non-zero and distinct from columns — are reported
//! separately as `literal_*` flags; they are necessary but not sufficient
//! (they omit, for example, triple-vs-pair collisions).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::code::Capability;
use crate::matrix::CheckMatrix;
use crate::span::ErrorSpan;

/// Two correctable patterns whose syndromes collide. `earlier` is `None`
/// when `later`'s syndrome is zero, i.e. it collides with the clean word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub earlier: Option<ErrorSpan>,
    pub later: ErrorSpan,
    pub syndrome: BitVec,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.earlier {
            Some(a) => write!(f, "collision: {a} vs {} syndrome={}", self.later, self.syndrome),
            None => write!(f, "collision: {} vs clean syndrome={}", self.later, self.syndrome),
        }
    }
}

impl Violation {
    /// Widest pattern involved; decides which capability levels it breaks.
    fn max_width(&self) -> usize {
        self.earlier.map(|s| s.width).unwrap_or(0).max(self.later.width)
    }
}

/// Outcome of checking one capability level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Full constraint analysis of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub sec_ok: bool,
    pub daec_ok: bool,
    pub taec_ok: bool,
    /// The quoted pair condition: adjacent-pair sums unique, non-zero and
    /// distinct from every column.
    pub literal_daec_ok: bool,
    /// The quoted triple condition: adjacent-triple sums non-zero and
    /// distinct from every column.
    pub literal_taec_ok: bool,
    /// All syndrome collisions among patterns of width <= 3, in scan order.
    pub violations: Vec<Violation>,
}

impl ConstraintReport {
    pub fn satisfies(&self, capability: Capability) -> bool {
        match capability {
            Capability::Sec => self.sec_ok,
            Capability::SecDaec => self.daec_ok,
            Capability::SecDaecTaec => self.taec_ok,
        }
    }
}

/// Scans patterns of width 1..=`max_width` in (width, start) order and
/// records every syndrome collision against the earliest pattern seen.
fn scan(h: &CheckMatrix, max_width: usize) -> Vec<Violation> {
    let n = h.cols();
    let mut first: HashMap<u128, ErrorSpan> = HashMap::new();
    let mut violations = Vec::new();
    for span in ErrorSpan::enumerate(n, max_width) {
        let syndrome = pattern_syndrome(h, span);
        if syndrome == 0 {
            violations.push(Violation {
                earlier: None,
                later: span,
                syndrome: BitVec::from_word(h.rows(), 0),
            });
            continue;
        }
        match first.get(&syndrome) {
            Some(&earlier) => violations.push(Violation {
                earlier: Some(earlier),
                later: span,
                syndrome: BitVec::from_word(h.rows(), syndrome),
            }),
            None => {
                first.insert(syndrome, span);
            }
        }
    }
    violations
}

fn pattern_syndrome(h: &CheckMatrix, span: ErrorSpan) -> u128 {
    (span.start..=span.end()).fold(0u128, |acc, j| acc ^ h.column_word(j))
}

/// Columns non-zero and pairwise distinct.
pub fn check_sec(h: &CheckMatrix) -> CheckResult {
    let violations = scan(h, 1);
    CheckResult { ok: violations.is_empty(), violations }
}

/// Singles and adjacent-pair sums all non-zero and collision free.
pub fn check_daec(h: &CheckMatrix) -> CheckResult {
    let violations = scan(h, 2);
    CheckResult { ok: violations.is_empty(), violations }
}

/// Singles, adjacent pairs and adjacent triples all non-zero and collision
/// free.
pub fn check_taec(h: &CheckMatrix) -> CheckResult {
    let violations = scan(h, 3);
    CheckResult { ok: violations.is_empty(), violations }
}

/// Runs every check once and reports all flags together.
pub fn analyze(h: &CheckMatrix) -> ConstraintReport {
    let violations = scan(h, 3);
    let sec_ok = !violations.iter().any(|v| v.max_width() <= 1);
    let daec_ok = !violations.iter().any(|v| v.max_width() <= 2);
    let taec_ok = violations.is_empty();
    ConstraintReport {
        sec_ok,
        daec_ok,
        taec_ok,
        literal_daec_ok: literal_pair_condition(h),
        literal_taec_ok: literal_triple_condition(h),
        violations,
    }
}

/// Pair sums unique among themselves, non-zero, and equal to no column.
fn literal_pair_condition(h: &CheckMatrix) -> bool {
    let n = h.cols();
    let columns: Vec<u128> = (1..=n).map(|j| h.column_word(j)).collect();
    let mut seen = HashMap::new();
    for start in 1..n {
        let s = columns[start - 1] ^ columns[start];
        if s == 0 || columns.contains(&s) || seen.insert(s, start).is_some() {
            return false;
        }
    }
    true
}

/// Triple sums non-zero and equal to no column.
fn literal_triple_condition(h: &CheckMatrix) -> bool {
    let n = h.cols();
    let columns: Vec<u128> = (1..=n).map(|j| h.column_word(j)).collect();
    for start in 1..n.saturating_sub(1) {
        let s = columns[start - 1] ^ columns[start] ^ columns[start + 1];
        if s == 0 || columns.contains(&s) {
            return false;
        }
    }
    true
}
