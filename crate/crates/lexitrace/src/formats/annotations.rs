//! Annotation files:
//!
//! ```json
//! {"corpus": "GDPR", "author": "I11", "annotations": [{"id": "A15.1",
//!   "provision": "GDPR:Art15(1)", "start": 41, "end": 80, "quote": "...",
//!   "concept": "control", "instance": "data access service"}]}
//! ```
//!
//! `start`/`end` count Unicode scalar values in the provision body text,
//! end exclusive. `concept` is one of `target`, `control`, `criterion`.
//! `instance` and `note` are optional.

use lexitrace_core::annotation::{Annotation, AnnotationSet, ConceptKind};
use lexitrace_core::corpus::{LegalDocument, ProvisionRef, Span};
use serde::{Deserialize, Serialize};

use super::{to_json, FormatError};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AnnotationSetFile {
    corpus: String,
    author: String,
    annotations: Vec<AnnotationFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationFile {
    id: String,
    provision: String,
    start: usize,
    end: usize,
    quote: String,
    concept: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    instance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl AnnotationSetFile {
    pub(crate) fn into_set(self) -> Result<AnnotationSet, FormatError> {
        let annotations = self
            .annotations
            .into_iter()
            .map(|a| {
                let provision: ProvisionRef =
                    a.provision.parse().map_err(|e| FormatError::field(format!("annotation {}", a.id), e))?;
                let concept: ConceptKind =
                    a.concept.parse().map_err(|e| FormatError::field(format!("annotation {}", a.id), e))?;
                Ok(Annotation {
                    id: a.id,
                    span: Span::new(provision, a.start, a.end),
                    quote: a.quote,
                    concept,
                    instance_hint: a.instance,
                    note: a.note,
                })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(AnnotationSet { corpus_id: self.corpus, author: self.author, annotations })
    }

    pub(crate) fn from_set(set: &AnnotationSet) -> Self {
        AnnotationSetFile {
            corpus: set.corpus_id.clone(),
            author: set.author.clone(),
            annotations: set
                .annotations
                .iter()
                .map(|a| AnnotationFile {
                    id: a.id.clone(),
                    provision: a.span.provision.to_string(),
                    start: a.span.start,
                    end: a.span.end,
                    quote: a.quote.clone(),
                    concept: a.concept.tag().to_string(),
                    instance: a.instance_hint.clone(),
                    note: a.note.clone(),
                })
                .collect(),
        }
    }
}

/// Parses an annotation file without checking it against a corpus.
pub fn parse_annotations(input: &str) -> Result<AnnotationSet, FormatError> {
    let file: AnnotationSetFile = serde_json::from_str(input)?;
    file.into_set()
}

/// Parses an annotation file and checks every annotation invariant
/// against `doc`, failing on the first violation.
pub fn load_annotations(input: &str, doc: &LegalDocument) -> Result<AnnotationSet, FormatError> {
    let set = parse_annotations(input)?;
    set.check(doc)?;
    Ok(set)
}

pub fn serialize_annotations(set: &AnnotationSet) -> String {
    to_json(&AnnotationSetFile::from_set(set))
}
