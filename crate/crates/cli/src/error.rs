use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("document: {0}")]
    Json(#[source] serde_json::Error),
    #[error("document at {path}: {message}")]
    Document { path: String, message: String },
    #[error("no {kind} named {name:?}")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] colop_core::Error),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}
