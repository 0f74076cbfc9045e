use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or unknown input, with the location already in the message.
    #[error("{path}: {message}")]
    Spec { path: PathBuf, message: String },

    #[error("{path}, line {line}: `{key}` {message}")]
    Invalid { path: PathBuf, line: usize, key: String, message: String },

    #[error("reference table {source_name}, line {line}: {message}")]
    Reference { source_name: String, line: usize, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Solver(#[from] confined_ks::Error),

    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io { context: context.into(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
