use thiserror::Error;

/// Errors raised by code construction, encoding and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// An input parameter is outside its valid domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An input violates an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
