use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] ell1_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

impl HarnessError {
    pub fn spec(message: impl Into<String>) -> Self {
        HarnessError::Spec(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    /// `2` for spec and regime errors, `3` for I/O and format errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Spec(_) | HarnessError::Core(_) => 2,
            HarnessError::Io { .. } | HarnessError::Csv(_) | HarnessError::Parse { .. } => 3,
        }
    }
}
