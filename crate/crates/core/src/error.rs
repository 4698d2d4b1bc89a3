use thiserror::Error;

/// Errors raised by walk construction, spectral analysis and the solvers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An integer result (usually an LCM) does not fit in 64 bits.
    #[error("range error: {0}")]
    Range(String),

    /// A computed quantity failed a self-check. Signals a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// A numeric expression could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
