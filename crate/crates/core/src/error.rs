//! Error types shared across the crate.

use thiserror::Error;

use crate::bits::BitVec;
use crate::span::ErrorSpan;

/// Argument errors from GF(2) vector and matrix arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unsupported vector length {len}, must be 1..=128")]
    LengthOutOfRange { len: usize },
    #[error("bit position {pos} out of 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("'{value}' is not a binary digit")]
    NotABit { value: char },
}

/// Errors from the matrix / code-file text formats, with 1-based line numbers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected header \"n k\", found {found:?}")]
    BadHeader { line: usize, found: String },
    #[error("line {line}: row has {got} bits, expected {expected}")]
    RaggedRow { line: usize, expected: usize, got: usize },
    #[error("line {line}: '{value}' is not a binary digit")]
    NotABit { line: usize, value: char },
    #[error("header declares n={n}, k={k}: need 1 <= k < n")]
    BadDimensions { n: usize, k: usize },
    #[error("code length n={n} exceeds the supported maximum of 128")]
    TooWide { n: usize },
    #[error("missing matrix row: expected {expected} rows, found {got}")]
    MissingRows { expected: usize, got: usize },
    #[error("line {line}: unexpected content {found:?} after the matrix")]
    TrailingContent { line: usize, found: String },
    #[error("line {line}: bad layout token {token:?} (expected I<j> or P<j>)")]
    BadLayoutToken { line: usize, token: String },
    #[error("line {line}: unknown capability {token:?} (expected SEC, DAEC or TAEC)")]
    BadCapability { line: usize, token: String },
    #[error("file has a layout line but no capability line (or vice versa)")]
    IncompleteCodeFile,
    #[error("file has no layout/capability lines; not a full code specification")]
    NotACodeFile,
}

/// Rejections raised while binding a matrix, layout and capability together.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeSpecError {
    #[error("layout has {got} entries, matrix has {expected} columns")]
    LayoutLengthMismatch { expected: usize, got: usize },
    #[error("layout is not a bijection: {detail}")]
    LayoutNotBijective { detail: String },
    #[error("parity columns are singular; parity bits cannot be solved from the matrix")]
    SingularParityColumns,
    #[error("basis message {index} assembles to a word with non-zero syndrome {syndrome}")]
    BasisCheckFailed { index: usize, syndrome: BitVec },
    #[error("shared parity plan does not flatten to the matrix equations (parity {parity})")]
    PlanMismatch { parity: usize },
    #[error("shared parity plan is malformed: {detail}")]
    BadPlan { detail: String },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Errors from codec construction and use.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("patterns {a} and {b} share syndrome {syndrome}; decoding would be ambiguous")]
    SyndromeCollision { a: ErrorSpan, b: ErrorSpan, syndrome: BitVec },
    #[error("pattern {span} has a zero syndrome; it is indistinguishable from a clean word")]
    ZeroSyndromePattern { span: ErrorSpan },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Invalid search configurations (distinct from an unsuccessful search).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search parameters n={n}, k={k}: need 1 <= k < n <= 128")]
    BadParameters { n: usize, k: usize },
    #[error("n - k = {r} check bits exceed the search limit of {max}")]
    TooManyCheckBits { r: usize, max: usize },
}

/// Rejections from wrapping a bare matrix into a code specification.
#[derive(Debug, Error)]
pub enum WrapError {
    #[error("matrix fails the {requested} check")]
    CapabilityViolation {
        requested: crate::code::Capability,
        report: Box<crate::constraints::ConstraintReport>,
    },
    #[error("matrix has rank {rank} < {r} check rows; no pivot set exists")]
    NoPivotSet { rank: usize, r: usize },
    #[error(transparent)]
    CodeSpec(#[from] CodeSpecError),
}

/// Errors from the fault verifier.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("sample count must be at least 1")]
    NoSamples,
}

/// Errors from XOR-program transformations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum XorError {
    #[error("the paper-shared policy only applies to the built-in (23,16) encoder program")]
    UnsupportedPolicy,
    #[error("program is malformed: {detail}")]
    BadProgram { detail: String },
}

/// Errors from HDL emission.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HdlError {
    #[error("program does not match the code: {detail}")]
    ProgramMismatch { detail: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Errors from parsing or evaluating emitted netlist text.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("signal {name:?} referenced but never declared")]
    UndeclaredSignal { name: String },
    #[error("signal {name:?} read before it is assigned")]
    UseBeforeAssign { name: String },
    #[error("signal {name:?} assigned more than once")]
    DoubleAssign { name: String },
    #[error("input {name:?}: expected {expected} bits, got {got}")]
    InputWidth { name: String, expected: usize, got: usize },
    #[error("missing value for input {name:?}")]
    MissingInput { name: String },
}
