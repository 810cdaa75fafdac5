use thiserror::Error;

/// Crate-wide error type. Constructors reject bad input here instead of
/// panicking so callers (CLI, harness) can report and exit cleanly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("length {len} is not divisible by {divisor}")]
    NotDivisible { len: usize, divisor: usize },

    #[error("invalid bit literal: {0}")]
    BadLiteral(String),

    #[error("invalid permutation: {0}")]
    BadPermutation(String),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    #[error("probe found no source point: {0}")]
    NoSource(String),

    #[error("invalid configuration:\n{}", .0.join("\n"))]
    InvalidConfig(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
