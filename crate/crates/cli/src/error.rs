use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {key}: {message}")]
    Validation { key: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{context}: {source}")]
    Model { context: String, source: decohere::Error },
}

impl CliError {
    pub(crate) fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn model(context: impl Into<String>) -> impl FnOnce(decohere::Error) -> Self {
        let context = context.into();
        move |source| CliError::Model { context, source }
    }

    /// Process exit status for this error: 2 for anything wrong with the
    /// invocation or its input, 1 for failures while computing or writing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation { .. } | CliError::Usage(_) | CliError::Read { .. } => 2,
            CliError::Write { .. } | CliError::Model { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
