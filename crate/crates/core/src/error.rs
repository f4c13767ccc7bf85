use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("degree mismatch at ({row}, {col}): entry has {found}, labels require {expected}")]
    DegreeMismatch {
        row: usize,
        col: usize,
        found: String,
        expected: String,
    },

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("could not sample a point with nonzero coordinates after {0} attempts")]
    DegeneratePoint(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
