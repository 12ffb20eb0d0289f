//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("invalid bracket table: {0}")]
    InvalidBracket(String),
    #[error("element is not composable: {0}")]
    NotComposable(String),
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("truncation overflow: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
