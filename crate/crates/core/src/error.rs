use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A precondition on the input data is not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Requested size exceeds a hard resource bound.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
