use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] cbcdbd_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0} bound check(s) violated")]
    Violation(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 usage, 2 validation, 3 bound violation, 4 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_budget() => 4,
            CliError::Schema { .. } | CliError::Core(_) | CliError::Io { .. } => 2,
            CliError::Violation(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
