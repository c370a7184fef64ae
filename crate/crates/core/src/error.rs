use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The point lies outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// An internal invariant that the theory guarantees was observed to fail.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    /// A hypothesis of a construction is not satisfied.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("objective returned a non-finite value at {witness:?}")]
    NonFinite { witness: Vec<f64> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
