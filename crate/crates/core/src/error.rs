use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt image data in {}: {message}", path.display())]
    Corrupt { path: PathBuf, message: String },

    #[error("failed to write {}: {message}", path.display())]
    Write { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit status used by the command line tool. Usage errors
    /// reported by the argument parser exit with 2.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::NotFound(_) => 3,
            Error::UnsupportedFormat(_) => 4,
            Error::Corrupt { .. } => 5,
            Error::Write { .. } => 6,
        }
    }
}
