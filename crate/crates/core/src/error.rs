use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function is singular at t = {0}")]
    SingularPoint(f64),
    #[error("t = {t} is outside the domain of the function: {reason}")]
    OutOfDomain { t: f64, reason: String },
    #[error("partition tag {0} is a singular point of the integrand")]
    SingularTag(f64),
    #[error("invalid function spec: {0}")]
    InvalidSpec(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid Young function: {0}")]
    InvalidTheta(String),
    #[error("expression `{expr}` failed: {reason}")]
    Expression { expr: String, reason: String },
    #[error("function is not in the Orlicz space: no k <= 2^64 brings the modular to <= 1")]
    NotInSpace,
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("integrand evaluated to a non-finite value at t = {0}")]
    NonFinite(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
