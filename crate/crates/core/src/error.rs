use thiserror::Error;

/// Errors raised by the Boolean-circuit toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input text. `line` is 1-based; 0 means "end of input".
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A structural precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An exhaustive procedure was asked to exceed its configured cap.
    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded { what: &'static str, size: u64, cap: u64 },

    /// Semantic validation failure for well-formed input (bad parameters etc).
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
