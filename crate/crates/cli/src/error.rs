use std::path::Path;

use thiserror::Error;
use tma_core::Error as CoreError;

/// Process exit codes. Usage errors are reported by clap with code 2.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const CONFIG: i32 = 3;
    pub const DATA: i32 = 4;
    pub const UNOBSERVABLE: i32 = 5;
    pub const IO: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("data: {0}")]
    Data(String),
    #[error("unobservable geometry (condition number {condition_number:.3e})")]
    Unobservable { condition_number: f64 },
    #[error("i/o: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Config(_) => exit::CONFIG,
            CliError::Data(_) => exit::DATA,
            CliError::Unobservable { .. } => exit::UNOBSERVABLE,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Core errors raised while validating a scenario or its parameters.
    pub fn config(e: CoreError) -> Self {
        match e {
            CoreError::Unobservable { condition_number } => {
                CliError::Unobservable { condition_number }
            }
            other => CliError::Config(other.to_string()),
        }
    }

    /// Core errors raised while processing observation data.
    pub fn data(e: CoreError) -> Self {
        match e {
            CoreError::Unobservable { condition_number } => {
                CliError::Unobservable { condition_number }
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<CoreError> for CliError {
    /// Parameter errors are configuration problems; everything else is
    /// about the data.
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. } => CliError::config(e),
            other => CliError::data(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
