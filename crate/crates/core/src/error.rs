use thiserror::Error;

/// Errors raised by the streaming matchers and their supporting primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value {value} outside domain [0, {bound})")]
    Domain { value: u64, bound: u64 },

    #[error("weight must be positive in rounded-weight mode")]
    NonPositiveWeight,

    #[error("stream model violation: {0}")]
    Model(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
