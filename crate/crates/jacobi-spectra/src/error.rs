//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates a precondition (non-positive
    /// variance, `m <= n - 1`, empty schedule, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An input lies outside the mathematical domain of the operation
    /// (evaluating an m-function on the real axis, truncating a 1x1 matrix).
    #[error("domain error: {0}")]
    Domain(String),

    /// The tridiagonal eigensolver exceeded its sweep cap.
    #[error("eigensolver did not converge: matrix size {size}, eigenvalue index {index}")]
    NoConvergence { size: usize, index: usize },

    /// An entry or trial index is out of range.
    #[error("index error: {0}")]
    Index(String),

    /// The requested check is not defined for this ensemble configuration.
    #[error("unsupported ensemble: {0}")]
    Unsupported(String),

    /// A numerical guard tripped (renormalization produced a non-positive
    /// weight, too many failed trials, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
