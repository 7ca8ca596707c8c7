use thiserror::Error;

/// Errors raised by the model and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The selling price does not cover the non-labor cost, so the profit
    /// constant is not positive.
    #[error("non-positive margin: profit constant C = {0} must be > 0")]
    NonpositiveMargin(f64),
    #[error("domain error: {0}")]
    Domain(String),
    /// The closed form `x^β/(β-1) + ...` is singular at β = 1.
    #[error("singular exponent: beta = 1 needs the logarithmic closed form")]
    SingularBeta,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
