use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid exponent {value}: {reason}")]
    InvalidExponent { value: f64, reason: &'static str },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("method {method} is not available for {field} scalars")]
    MethodFieldMismatch { method: &'static str, field: &'static str },

    #[error("the form is identically zero; the ratio is undefined")]
    ZeroForm,

    #[error("the vector is zero")]
    ZeroVector,

    #[error("the vector family is empty")]
    EmptyFamily,

    #[error("no Kahane constant supplied for r = {0}")]
    MissingKahaneConstant(f64),

    #[error("inconsistent convex weights: {0}")]
    InconsistentWeights(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
