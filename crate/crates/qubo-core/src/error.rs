//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: model has {expected} variables, assignment has {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("assignment entries must be 0 or 1, found {0}")]
    InvalidBit(u8),

    #[error("spin entries must be -1 or +1, found {0}")]
    InvalidSpin(i8),

    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("coefficients and offsets must be finite")]
    NonFinite,

    #[error("penalty must be positive, got {0}")]
    NonPositivePenalty(f64),

    #[error("{kind} takes {expected} variables, got {actual}")]
    WrongArity {
        kind: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("variable indices must be distinct")]
    DuplicateVariable,

    #[error("constraint coefficients and right-hand side must be integers, found {0}")]
    NonIntegerData(f64),

    #[error("constraint cannot be satisfied by any binary assignment")]
    InfeasibleConstraint,

    #[error("constraint {0} is an inequality; expand it to an equality first")]
    InequalityConstraint(usize),

    #[error("model has {n} variables, exact solver limit is {limit}; try the tabu solver")]
    TooLarge { n: usize, limit: usize },

    #[error("polynomial has degree {0}, expected at most 2")]
    DegreeTooHigh(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
