//! Declarative front end for `colop`: the input document, command
//! implementations and their reports.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

pub use document::{Document, Model, Preset};
pub use error::{CliError, Result};
pub use report::Report;

/// Reads and validates a document; `None` gives the one-color empty model.
pub fn load(path: Option<&std::path::Path>) -> Result<Model> {
    let doc = match path {
        None => Document::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            Document::parse(&text)?
        }
    };
    doc.build()
}
