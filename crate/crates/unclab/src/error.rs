use crate::exprdsl::{EvalError, ParseError};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("incompatible representations: {0}")]
    IncompatibleRepresentation(String),
    #[error("unsupported conversion: {0}")]
    UnsupportedConversion(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("evaluation error: {0}")]
    Eval(#[from] EvalError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
