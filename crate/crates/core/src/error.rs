use thiserror::Error;

/// Errors raised by the exact engine, the oracles and the generators.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^61")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("zero vector at position {index}")]
    ZeroVector { index: usize },
    #[error("zero factor in tensor {tensor}, mode {mode}")]
    ZeroFactor { tensor: usize, mode: usize },
    #[error("scalars from different fields were combined")]
    FieldMismatch,
    #[error("characteristic {char} is too small, need 0 or above {need}")]
    Characteristic { char: u64, need: usize },
    #[error("subset enumeration over n = {n} exceeds the cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },
    #[error("search budget exceeded after {used} units ({limit} allowed)")]
    BudgetExceeded { used: u64, limit: u64 },
    #[error("criterion is only available through the finite-field oracle: {0}")]
    OracleOnly(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
