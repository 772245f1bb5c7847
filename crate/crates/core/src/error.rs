use thiserror::Error;

/// Errors raised by the simulation primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a physical state: {0}")]
    NotPhysical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("truncation dimension {dim} too small: leaked weight {leakage:e}")]
    Truncation { dim: usize, leakage: f64 },

    #[error("copy budget exhausted by `{strategy}`: requested {requested}, consumed {consumed} of {limit}")]
    BudgetExhausted {
        strategy: String,
        requested: u64,
        consumed: u64,
        limit: u64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
