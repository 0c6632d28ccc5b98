//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or malformed input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// Vector/matrix dimension does not match the object it is applied to.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Exact integer or rational arithmetic left the 64-bit range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// Too few usable data points for a fit or profile.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A search would exceed the configured enumeration budget.
    #[error("search budget exceeded: radius {radius:.1} > {limit:.0}")]
    SearchBudget { radius: f64, limit: f64 },

    /// Rejection sampling failed to produce a matrix.
    #[error("matrix sampler rejected {0} candidates in a row; relax norm_bound")]
    RejectionLimit(usize),

    /// Configuration file or command line problem.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
