use thiserror::Error;

use crate::recognizers::CorrectnessReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed template, universe file or pattern text.
    #[error("format error: {0}")]
    Format(String),

    /// Malformed tree DSL. `position` is a byte offset into the input.
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would expand or index more patterns than supported.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Two images share a pattern.
    #[error("images `{first}` and `{second}` overlap on pattern {pattern}")]
    Overlap {
        first: String,
        second: String,
        pattern: String,
    },

    /// The tree mentions a sign or image the universe does not have.
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    /// The tree misclassifies at least one pattern.
    #[error("incorrect recognizer: {0}")]
    Incorrect(CorrectnessReport),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
