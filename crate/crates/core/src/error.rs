use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("event {step} ({event}) does not apply: {msg}")]
    BadEvent {
        step: usize,
        event: String,
        msg: String,
    },
    #[error("grading violation at step {step}: expected {expected:?}, found {found:?}")]
    Grading {
        step: usize,
        expected: (i64, i64),
        found: (i64, i64),
    },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid braid: {0}")]
    InvalidBraid(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}
