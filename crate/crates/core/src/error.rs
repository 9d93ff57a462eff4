use thiserror::Error;

/// Errors raised by the engine.
///
/// `Usage` covers caller mistakes (bad arguments, mismatched operands,
/// limits exceeded); `Config` is a well-formed request that the chosen mode
/// cannot serve; `Internal` is a broken invariant.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate distribution at n = {n}: variance is zero")]
    Degenerate { n: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
