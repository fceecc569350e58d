//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    #[error("invalid configuration for `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown variable label: {0}")]
    UnknownLabel(String),

    #[error("strategy is infeasible: {0}")]
    Infeasible(String),

    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    #[error("bisection bracket exhausted: {0}")]
    BracketExhausted(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }
}
