use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{context}: {source}")]
    Invalid {
        context: String,
        #[source]
        source: lueq::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(path: &Path, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.display().to_string(),
            message: message.into(),
        }
    }

    pub fn invalid(path: &Path, source: lueq::Error) -> Self {
        CliError::Invalid {
            context: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Invalid { .. } => 3,
        }
    }
}
