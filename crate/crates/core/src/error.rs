use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("point index {index} out of range for a space of {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("space of {0} points exceeds the supported maximum of {max}", max = crate::space::MAX_POINTS)]
    TooLarge(usize),

    #[error("relation is not transitively closed: leq({0},{1}) and leq({1},{2}) but not leq({0},{2})")]
    NotTransitive(usize, usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid fence: {0}")]
    InvalidFence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid 2-space model: {0}")]
    InvalidModel(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
