use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A measure part would have infinite total mass.
    #[error("infinite mass: {0}")]
    InfiniteMass(String),

    /// Series evaluation too close to the boundary for the available truncation.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// The inner Hankel sums do not converge for this input.
    #[error("divergent inner sum: {0}")]
    Divergent(String),

    /// A fit or quadrature could not be carried out.
    #[error("degenerate computation: {0}")]
    Degenerate(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
