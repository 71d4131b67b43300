use std::path::PathBuf;

use loxoforge_core::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Geom(#[from] GeomError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {msg}", path.display())]
    Malformed { path: PathBuf, msg: String },

    #[error("{failed} of {total} reports failed verification")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Geom(e) if e.is_config_error() => 2,
            CliError::Geom(_) => 3,
            CliError::Io { .. } | CliError::Malformed { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
