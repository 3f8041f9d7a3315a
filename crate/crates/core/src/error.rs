use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("operator is zero where a nonzero operator is required")]
    ZeroOperator,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("invalid exponent {0}")]
    InvalidExponent(f64),

    #[error("unsupported order alpha = {0}")]
    UnsupportedOrder(f64),

    #[error("domain condition violated: {0}")]
    DomainViolation(&'static str),

    #[error("operators do not have equal support")]
    SupportMismatch,

    #[error("initializer is orthogonal to the support of rho_A")]
    OrthogonalInitializer,

    #[error("state is not strictly positive")]
    NotStrictlyPositive,

    #[error("objective increased by {increase:e} at iteration {n}")]
    MonotonicityViolation { n: usize, increase: f64 },

    #[error("problem too large for the oracle: {0}")]
    TooLarge(String),

    #[error("invalid state: {0}")]
    InvalidState(&'static str),

    #[error("invalid probability mass function: {0}")]
    InvalidPmf(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
