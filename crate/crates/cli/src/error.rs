use thiserror::Error;

/// Failures that stop a command before any check runs (exit status 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: at `{field}`: {message}")]
    Parse {
        path: String,
        field: String,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qhier_core::Error),
}
