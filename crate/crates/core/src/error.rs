use thiserror::Error;

/// Errors raised by constructions and certifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration cap exceeded: {what} needs {required} items, cap is {cap}")]
    CapExceeded { what: &'static str, required: u128, cap: u128 },

    #[error("construction failed after {attempts} attempts: {reason}")]
    ConstructionFailed { attempts: u32, reason: String },

    #[error("not a spherical embedding: entry {row} of column {col} is {value}")]
    NotAnEmbedding { row: usize, col: usize, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
