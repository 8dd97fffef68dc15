use thiserror::Error;

/// Errors produced by construction and validation of the algebraic objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("space mismatch: {0}")]
    Space(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error (sign or solver bug): {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
    pub fn arity(msg: impl Into<String>) -> Self {
        Error::Arity(msg.into())
    }
    pub fn space(msg: impl Into<String>) -> Self {
        Error::Space(msg.into())
    }
    pub fn degree(msg: impl Into<String>) -> Self {
        Error::Degree(msg.into())
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
