//! Crate-wide error type for loading, storing, and the CLI.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A CSV cell that failed to load, naming the data row and column.
    #[error("{path}: row {row}, column {column}: {message}")]
    Load { path: PathBuf, row: usize, column: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid data: {}", violations.join("; "))]
    Validation { violations: Vec<String> },
    #[error("{kind} {id} not found in store")]
    NotFound { kind: &'static str, id: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn validation(violations: Vec<String>) -> Self {
        Error::Validation { violations }
    }

    /// Process exit code for the CLI: 2 for I/O failures, 1 for anything
    /// else (validation, parse, lookup).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
