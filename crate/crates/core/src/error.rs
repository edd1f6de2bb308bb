use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("scheme {scheme} needs block size {expected}, grid has {found}")]
    BlockSizeMismatch {
        scheme: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("grid mismatch: operator has {expected} points, input has {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unstable configuration: {0}")]
    Unstable(String),

    #[error("solution blew up at t = {time:.6e} after {steps} steps")]
    BlowUp { time: f64, steps: usize },

    #[error("filter configuration: {0}")]
    FilterConfig(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
