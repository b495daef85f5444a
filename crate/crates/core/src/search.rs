//! Backtracking construction of check matrices that satisfy the adjacent
//! error-correction constraints, and wrapping of bare matrices into codes.
//!
//! Columns are chosen left to right. A candidate column is admitted when
//! the syndromes it introduces — itself, its sum with the previous column,
//! and its sum with the previous two — are non-zero and unseen, which keeps
//! the running pattern-to-syndrome map injective at all times. The search
//! additionally requires the finished matrix to contain one unit column per
//! check row so that parity bits have dedicated codeword positions; branches
//! that can no longer reach that are pruned.
//!
//! With a fixed candidate order the whole procedure is deterministic, so a
//! `(seed, column_order)` pair always reproduces the same matrix.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::code::{BitRole, Capability, CodeSpec};
use crate::constraints;
use crate::error::{SearchError, WrapError};
use crate::matrix::CheckMatrix;

/// Hard limit on check bits: candidate columns are materialized as a list
/// of all `2^r - 1` non-zero values.
pub const MAX_CHECK_BITS: usize = 20;

/// Default backtrack budget.
pub const DEFAULT_MAX_BACKTRACKS: u64 = 10_000_000;

/// Candidate column ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnOrder {
    /// Odd-weight values first (balances row weights, Hsiao style), each
    /// group in ascending value order. Ignores the seed.
    Lexicographic,
    /// A seeded shuffle of all non-zero values.
    Randomized,
}

/// Parameters of one search run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub capability: Capability,
    pub seed: u64,
    pub max_backtracks: u64,
    pub column_order: ColumnOrder,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, capability: Capability) -> Result<Self, SearchError> {
        if k == 0 || k >= n || n > crate::bits::MAX_LEN {
            return Err(SearchError::BadParameters { n, k });
        }
        let r = n - k;
        if r > MAX_CHECK_BITS {
            return Err(SearchError::TooManyCheckBits { r, max: MAX_CHECK_BITS });
        }
        Ok(SearchConfig {
            n,
            k,
            capability,
            seed: 0,
            max_backtracks: DEFAULT_MAX_BACKTRACKS,
            column_order: ColumnOrder::Lexicographic,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_order(mut self, order: ColumnOrder) -> Self {
        self.column_order = order;
        self
    }

    pub fn with_max_backtracks(mut self, budget: u64) -> Self {
        self.max_backtracks = budget;
        self
    }

    fn r(&self) -> usize {
        self.n - self.k
    }
}

/// Result of a search run.
#[derive(Debug)]
pub enum SearchOutcome {
    /// A matrix was found and independently re-checked.
    Found { spec: Box<CodeSpec>, backtracks: u64 },
    /// The whole candidate tree was exhausted: no matrix with the required
    /// structure (r unit columns, injective pattern syndromes) exists.
    Infeasible { backtracks: u64 },
    /// The backtrack budget ran out before the tree was exhausted.
    BudgetExhausted { backtracks: u64 },
}

impl SearchOutcome {
    pub fn spec(&self) -> Option<&CodeSpec> {
        match self {
            SearchOutcome::Found { spec, .. } => Some(spec),
            _ => None,
        }
    }
}

/// Incremental syndrome bookkeeping for a committed column prefix.
///
/// `feasible` answers exactly the question the full constraint checker
/// would: does extending the prefix by this column keep every pattern
/// syndrome (up to the capability's burst width) non-zero and distinct?
pub(crate) struct PrefixState {
    max_burst: usize,
    cols: Vec<u128>,
    seen: Vec<bool>,
}

impl PrefixState {
    pub(crate) fn new(r: usize, capability: Capability) -> Self {
        PrefixState {
            max_burst: capability.max_burst(),
            cols: Vec::new(),
            seen: vec![false; 1usize << r],
        }
    }

    /// Syndromes a candidate would add: itself, pair with the last column,
    /// triple with the last two. Values are returned even when some are
    /// capability-irrelevant; callers slice by `max_burst`.
    fn new_syndromes(&self, cand: u128) -> [Option<u128>; 3] {
        let len = self.cols.len();
        let pair = (self.max_burst >= 2 && len >= 1).then(|| cand ^ self.cols[len - 1]);
        let triple = (self.max_burst >= 3 && len >= 2)
            .then(|| cand ^ self.cols[len - 1] ^ self.cols[len - 2]);
        [Some(cand), pair, triple]
    }

    /// True when pushing `cand` keeps the pattern-syndrome map injective.
    pub(crate) fn feasible(&self, cand: u128) -> bool {
        if cand == 0 {
            return false;
        }
        // The new single, pair and triple syndromes are pairwise distinct
        // and non-zero automatically once each is absent from `seen`:
        // equality among them would force a zero or repeated column.
        self.new_syndromes(cand)
            .into_iter()
            .flatten()
            .all(|s| s != 0 && !self.seen[s as usize])
    }

    pub(crate) fn push(&mut self, cand: u128) {
        for s in self.new_syndromes(cand).into_iter().flatten() {
            debug_assert!(!self.seen[s as usize]);
            self.seen[s as usize] = true;
        }
        self.cols.push(cand);
    }

    pub(crate) fn pop(&mut self) {
        let cand = self.cols.pop().expect("pop on empty prefix");
        // cols now holds the shorter prefix, which is what new_syndromes
        // must see to recompute the same pair/triple values.
        for s in self.new_syndromes(cand).into_iter().flatten() {
            self.seen[s as usize] = false;
        }
    }

    pub(crate) fn columns(&self) -> &[u128] {
        &self.cols
    }
}

/// Outcome of one depth-first run over a fixed candidate order.
enum DfsOutcome {
    Found { cols: Vec<u128>, backtracks: u64 },
    /// The whole tree was exhausted; the instance is infeasible.
    Exhausted { backtracks: u64 },
    /// The backtrack slice ran out first.
    OutOfBudget { backtracks: u64 },
}

/// Depth-first search over one candidate order with a backtrack budget.
fn dfs(config: &SearchConfig, order: &[u128], budget: u64) -> DfsOutcome {
    let n = config.n;
    let r = config.r();
    let mut state = PrefixState::new(r, config.capability);
    let mut units: u128 = 0;
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut backtracks: u64 = 0;
    let mut next_idx = 0usize;

    loop {
        let depth = chosen.len();
        let mut found = None;
        for (offset, &cand) in order[next_idx..].iter().enumerate() {
            if !state.feasible(cand) {
                continue;
            }
            // Unit-column quota: every check row still missing a unit
            // column must fit into the positions left after this one.
            let units_after = units | if cand.is_power_of_two() { cand } else { 0 };
            let missing = r - units_after.count_ones() as usize;
            if missing > n - depth - 1 {
                continue;
            }
            found = Some((next_idx + offset, cand));
            break;
        }

        match found {
            Some((idx, cand)) => {
                state.push(cand);
                if cand.is_power_of_two() {
                    units |= cand;
                }
                chosen.push(idx);
                if chosen.len() == n {
                    return DfsOutcome::Found { cols: state.columns().to_vec(), backtracks };
                }
                next_idx = 0;
            }
            None => {
                let Some(idx) = chosen.pop() else {
                    return DfsOutcome::Exhausted { backtracks };
                };
                let cand = order[idx];
                state.pop();
                if cand.is_power_of_two() {
                    units &= !cand;
                }
                backtracks += 1;
                if backtracks >= budget {
                    return DfsOutcome::OutOfBudget { backtracks };
                }
                next_idx = idx + 1;
            }
        }
    }
}

/// Backtrack slice granted to the first randomized restart; later restarts
/// double it.
const FIRST_RESTART_SLICE: u64 = 1024;

/// Searches for a matrix meeting `config`. Deterministic for a given
/// configuration.
///
/// Lexicographic order runs one exhaustive depth-first pass. Randomized
/// order runs seeded restarts — a fresh shuffle whenever the current one
/// exceeds its backtrack slice — because a single unlucky column order can
/// thrash for the whole budget on instances another order solves greedily.
/// A restart that exhausts its tree without hitting the slice limit proves
/// infeasibility outright.
pub fn search(config: &SearchConfig) -> SearchOutcome {
    let found = |cols: Vec<u128>, backtracks: u64| {
        let r = config.r();
        let cols: Vec<BitVec> = cols.iter().map(|&w| BitVec::from_word(r, w)).collect();
        let h = CheckMatrix::from_columns(&cols).expect("search built a valid shape");
        let name = format!(
            "search_n{}_k{}_{}",
            config.n,
            config.k,
            config.capability.token().to_ascii_lowercase()
        );
        let spec = verify_and_wrap(name, h, config.capability)
            .expect("searched matrix passes the independent checker");
        SearchOutcome::Found { spec: Box::new(spec), backtracks }
    };

    match config.column_order {
        ColumnOrder::Lexicographic => {
            let mut order: Vec<u128> = (1u128..(1u128 << config.r())).collect();
            order.sort_by_key(|v| (v.count_ones() % 2 == 0, *v));
            match dfs(config, &order, config.max_backtracks) {
                DfsOutcome::Found { cols, backtracks } => found(cols, backtracks),
                DfsOutcome::Exhausted { backtracks } => SearchOutcome::Infeasible { backtracks },
                DfsOutcome::OutOfBudget { backtracks } => {
                    SearchOutcome::BudgetExhausted { backtracks }
                }
            }
        }
        ColumnOrder::Randomized => {
            let mut order: Vec<u128> = (1u128..(1u128 << config.r())).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut spent: u64 = 0;
            let mut slice = FIRST_RESTART_SLICE;
            loop {
                order.shuffle(&mut rng);
                let granted = slice.min(config.max_backtracks - spent);
                match dfs(config, &order, granted) {
                    DfsOutcome::Found { cols, backtracks } => {
                        return found(cols, spent + backtracks);
                    }
                    DfsOutcome::Exhausted { backtracks } => {
                        return SearchOutcome::Infeasible { backtracks: spent + backtracks };
                    }
                    DfsOutcome::OutOfBudget { backtracks } => {
                        spent += backtracks;
                        if spent >= config.max_backtracks {
                            return SearchOutcome::BudgetExhausted { backtracks: spent };
                        }
                        slice = slice.saturating_mul(2);
                    }
                }
            }
        }
    }
}

/// Checks a bare matrix at `capability` with the full constraint checker,
/// then derives a canonical layout: parity bits at the unit columns when a
/// complete set exists (one per row), otherwise at the Gaussian pivot
/// columns; information bits fill the remaining positions in ascending
/// order.
pub fn verify_and_wrap(
    name: impl Into<String>,
    h: CheckMatrix,
    capability: Capability,
) -> Result<CodeSpec, WrapError> {
    let report = constraints::analyze(&h);
    if !report.satisfies(capability) {
        return Err(WrapError::CapabilityViolation {
            requested: capability,
            report: Box::new(report),
        });
    }

    let r = h.rows();
    let mut unit_pos: Vec<Option<usize>> = vec![None; r];
    for j in 1..=h.cols() {
        let w = h.column_word(j);
        if w.is_power_of_two() {
            let row = w.trailing_zeros() as usize;
            if unit_pos[row].is_none() {
                unit_pos[row] = Some(j);
            }
        }
    }

    let parity_positions: Vec<usize> = if unit_pos.iter().all(Option::is_some) {
        let mut v: Vec<usize> = unit_pos.into_iter().flatten().collect();
        v.sort_unstable();
        v
    } else {
        let pivots = h.pivot_columns();
        if pivots.len() < r {
            return Err(WrapError::NoPivotSet { rank: pivots.len(), r });
        }
        pivots
    };

    let mut layout = Vec::with_capacity(h.cols());
    let mut next_parity = 1usize;
    let mut next_info = 1usize;
    for pos in 1..=h.cols() {
        if parity_positions.contains(&pos) {
            layout.push(BitRole::Parity(next_parity));
            next_parity += 1;
        } else {
            layout.push(BitRole::Info(next_info));
            next_info += 1;
        }
    }

    CodeSpec::new(name, h, layout, capability).map_err(WrapError::from)
}
