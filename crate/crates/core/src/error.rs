use thiserror::Error;

/// Errors raised by series construction, operators and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation error: requested {requested} coefficients, {available} available")]
    Truncation { requested: usize, available: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("series is not normalized (leading coefficient {0})")]
    Normalization(String),
    #[error("singularity at z = {re}{im:+}i: {what}")]
    Singularity { re: f64, im: f64, what: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
