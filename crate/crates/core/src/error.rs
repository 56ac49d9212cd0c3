use thiserror::Error;

use crate::strings::MetricKind;

/// Errors reported by the table builders, solvers, oracles and generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlcsError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet symbol {0:#04x} appears more than once")]
    DuplicateSymbol(u8),
    #[error("string {index} is empty")]
    EmptyString { index: usize },
    #[error("at least two strings are required, got {count}")]
    TooFewStrings { count: usize },
    #[error("letter {letter:#04x} at position {position} of string {index} is not in the alphabet")]
    LetterOutOfAlphabet {
        index: usize,
        position: usize,
        letter: u8,
    },
    #[error("strings have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("letter set is empty")]
    EmptyLetterSet,
    #[error("index {index} is out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("operation requires an edit-type metric, got {0:?}")]
    WrongMetric(MetricKind),
    #[error("metric {0:?} is not supported by this solver")]
    UnsupportedMetric(MetricKind),
    #[error("threshold t = {t} is outside 1..={m}")]
    ThresholdOutOfRange { t: usize, m: usize },
    #[error("{subsets} subsets exceed the configured limit of {limit}")]
    SubsetExplosion { subsets: u128, limit: u128 },
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("vector dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid cost: {0}")]
    InvalidCost(String),
    #[error("string of length {0} exceeds the table size limit")]
    TooLong(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = AlcsError> = std::result::Result<T, E>;
