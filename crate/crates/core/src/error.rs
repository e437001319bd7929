use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A computation would exceed a hard resource limit.
    #[error("capacity exceeded: {what} needs {required}, limit is {limit}")]
    Capacity {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    /// A normalisation was requested for a measure of zero mass.
    #[error("measure has zero total mass")]
    EmptyMeasure,
    /// Inconsistent or unusable configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
