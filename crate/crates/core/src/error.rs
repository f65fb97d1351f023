use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("duration {duration} s is not achievable for this joint")]
    InfeasibleDuration { duration: f64 },
    #[error("c_best {c_best} does not exceed focal distance {c_min}")]
    DegenerateEllipse { c_best: f64, c_min: f64 },
    #[error("no seed state found in the informed set")]
    SeedNotFound,
    #[error("hit-and-run chain stalled without an accepted point")]
    ChainStalled,
    #[error("planning budget exhausted before a first solution")]
    NoSolution,
    #[error("wall-clock budget exceeded")]
    WallClockExceeded,
    #[error("io error on {path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            reason: err.to_string(),
        }
    }
}
