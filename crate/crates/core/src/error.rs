use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A structurally broken instance description (bad JSON fields, indices
    /// out of range, capacities that do not line up, ...).
    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    /// The operation only works on instances small enough to enumerate.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// An iteration watchdog tripped; the supplied oracle is most likely not
    /// a matroid (exchange arguments stopped making progress).
    #[error("no progress: {0}")]
    NoProgress(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedInstance(msg.into())
    }
}
