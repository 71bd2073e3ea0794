//! Readers and writers for the on-disk formats.
//!
//! All structured files are UTF-8 JSON with the field names used below;
//! tabular reports and survey data are CSV.

pub mod annotations;
pub mod corpus;
pub mod model;
pub mod reports;
pub mod survey;

use lexitrace_core::annotation::AnnotationError;
use lexitrace_core::corpus::CorpusError;
use lexitrace_core::model::ModelError;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{context}: {message}")]
    Field { context: String, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Annotation(#[from] AnnotationError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl FormatError {
    /// Structural problems with the file itself, as opposed to content
    /// that parsed but broke a domain invariant.
    pub fn is_syntax(&self) -> bool {
        matches!(self, FormatError::Syntax { .. } | FormatError::Field { .. } | FormatError::Csv(_))
    }

    pub(crate) fn field(context: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Field { context: context.into(), message: message.to_string() }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep just the cause
        let message = match message.rfind(" at line ") {
            Some(idx) => message[..idx].to_string(),
            None => message,
        };
        FormatError::Syntax { line: e.line(), column: e.column(), message }
    }
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializing plain data cannot fail");
    s.push('\n');
    s
}
