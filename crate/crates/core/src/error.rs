use thiserror::Error;

/// Errors raised by the exact and numeric pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (mismatched fields, bad residues, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A coefficient was requested beyond what is known, or a numeric value
    /// could not be rounded reliably at the working precision.
    #[error("precision error: {0}")]
    Precision(String),
    /// Evaluation of a rational function hit a zero of the denominator.
    #[error("pole: denominator vanishes at {0}")]
    Pole(String),
    /// The rational-function identification left a nonzero residual.
    #[error("identification failed: residual {residual} at exponent {exponent}")]
    Identification { exponent: String, residual: String },
    /// No algebraic number of the allowed degree and height matched.
    #[error("recognition failed: {0}")]
    Recognition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
