use alloc::string::String;
use core::fmt;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A model was rejected at construction.
    InvalidModel(String),
    /// The operation has no exact path for this model.
    UnsupportedModel(&'static str),
    /// An enumeration or size guard was exceeded.
    Resource(String),
    /// Too few samples for a statistical check.
    InsufficientData { needed: usize, got: usize },
    /// An iterative method did not converge.
    Numeric(String),
    /// A self-checked bound did not hold.
    BoundViolated(String),
    /// An internal invariant broke; indicates a bug.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::InvalidModel(m) => write!(f, "invalid model: {m}"),
            Error::UnsupportedModel(m) => write!(f, "unsupported model: {m}"),
            Error::Resource(m) => write!(f, "resource limit: {m}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} samples, got {got}")
            }
            Error::Numeric(m) => write!(f, "numeric failure: {m}"),
            Error::BoundViolated(m) => write!(f, "bound violated: {m}"),
            Error::Internal(m) => write!(f, "internal invariant broken: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn resource(msg: impl Into<String>) -> Error {
    Error::Resource(msg.into())
}
