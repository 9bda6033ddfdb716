use thiserror::Error;

/// Errors produced across the partitioning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite {what} at iteration {iter}")]
    NonFinite { what: &'static str, iter: usize },

    #[error(
        "capacity augmentation exhausted after {attempts} attempts \
         (best infeasible candidate has violation {violation})"
    )]
    AugmentationExhausted {
        attempts: usize,
        violation: i64,
        /// Best infeasible full-length assignment (`true` = first part).
        best_candidate: Vec<bool>,
    },

    #[error("brute force refused: {n} vertices exceeds the guard of {limit}")]
    OracleRefused { n: usize, limit: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
