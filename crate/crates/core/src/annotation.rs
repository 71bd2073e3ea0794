//! Concept taxonomy and standoff annotations over a [`LegalDocument`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::corpus::{LegalDocument, ResolveError, SliceError, Span};
use crate::diagnostic::Diagnostic;

/// The three concepts an annotation can carry. Targets of regulation and
/// compliance controls are legal objects; criteria qualify them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptKind {
    TargetOfRegulation,
    ComplianceControl,
    Criterion,
}

impl ConceptKind {
    pub const ALL: [ConceptKind; 3] =
        [ConceptKind::TargetOfRegulation, ConceptKind::ComplianceControl, ConceptKind::Criterion];

    pub fn is_legal_object(&self) -> bool {
        !matches!(self, ConceptKind::Criterion)
    }

    /// File-format tag.
    pub fn tag(&self) -> &'static str {
        match self {
            ConceptKind::TargetOfRegulation => "target",
            ConceptKind::ComplianceControl => "control",
            ConceptKind::Criterion => "criterion",
        }
    }

    /// Rendering marker, e.g. `<<control>>`.
    pub fn marker(&self) -> &'static str {
        match self {
            ConceptKind::TargetOfRegulation => "<<target>>",
            ConceptKind::ComplianceControl => "<<control>>",
            ConceptKind::Criterion => "<<criterion>>",
        }
    }
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.marker())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown concept tag {0:?} (expected \"target\", \"control\" or \"criterion\")")]
pub struct UnknownConcept(pub String);

impl FromStr for ConceptKind {
    type Err = UnknownConcept;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "target" => Ok(ConceptKind::TargetOfRegulation),
            "control" => Ok(ConceptKind::ComplianceControl),
            "criterion" => Ok(ConceptKind::Criterion),
            other => Err(UnknownConcept(other.to_string())),
        }
    }
}

/// Where a content-model instance is allocated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbstractionLevel {
    /// Abstract content that still needs interpretation.
    Requirements,
    /// Content that maps directly onto the system.
    System,
}

impl AbstractionLevel {
    pub fn tag(&self) -> &'static str {
        match self {
            AbstractionLevel::Requirements => "requirements",
            AbstractionLevel::System => "system",
        }
    }
}

impl fmt::Display for AbstractionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown abstraction level {0:?} (expected \"requirements\" or \"system\")")]
pub struct UnknownLevel(pub String);

impl FromStr for AbstractionLevel {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "requirements" => Ok(AbstractionLevel::Requirements),
            "system" => Ok(AbstractionLevel::System),
            other => Err(UnknownLevel(other.to_string())),
        }
    }
}

/// A span of legal text tagged with a concept. `quote` repeats the spanned
/// text so that edits to the underlying corpus are detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub id: String,
    pub span: Span,
    pub quote: String,
    pub concept: ConceptKind,
    /// Name of the content-model instance this text supports, if known.
    pub instance_hint: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSet {
    pub corpus_id: String,
    pub author: String,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnnotationError {
    #[error("annotation set targets corpus {found:?} but the corpus is {expected:?}")]
    CorpusMismatch { expected: String, found: String },
    #[error("{id}: span is in corpus {found:?}, set targets {expected:?}")]
    ForeignProvision { id: String, expected: String, found: String },
    #[error("{id}: unknown provision: {source}")]
    UnknownProvision { id: String, source: ResolveError },
    #[error("{id}: {provision} has no body text")]
    NoBodyText { id: String, provision: String },
    #[error("{id}: empty span [{start}, {end})")]
    EmptySpan { id: String, start: usize, end: usize },
    #[error("{id}: span [{start}, {end}) out of bounds for {provision} (length {len})")]
    SpanOutOfBounds { id: String, provision: String, start: usize, end: usize, len: usize },
    #[error("{id}: quote mismatch: expected {expected:?}, found {found:?}")]
    QuoteMismatch { id: String, expected: String, found: String },
    #[error("duplicate annotation id {0:?}")]
    DuplicateId(String),
}

impl AnnotationError {
    /// Id of the offending annotation, or the set author for set-level errors.
    pub fn subject(&self) -> &str {
        match self {
            AnnotationError::CorpusMismatch { found, .. } => found,
            AnnotationError::ForeignProvision { id, .. }
            | AnnotationError::UnknownProvision { id, .. }
            | AnnotationError::NoBodyText { id, .. }
            | AnnotationError::EmptySpan { id, .. }
            | AnnotationError::SpanOutOfBounds { id, .. }
            | AnnotationError::QuoteMismatch { id, .. }
            | AnnotationError::DuplicateId(id) => id,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            AnnotationError::CorpusMismatch { .. } => "corpus-mismatch",
            AnnotationError::ForeignProvision { .. } => "foreign-provision",
            AnnotationError::UnknownProvision { .. } => "unknown-provision",
            AnnotationError::NoBodyText { .. } => "no-body-text",
            AnnotationError::EmptySpan { .. } => "empty-span",
            AnnotationError::SpanOutOfBounds { .. } => "span-out-of-bounds",
            AnnotationError::QuoteMismatch { .. } => "quote-mismatch",
            AnnotationError::DuplicateId(_) => "duplicate-id",
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.subject(), self.code(), self.to_string())
    }
}

impl AnnotationSet {
    pub fn get(&self, id: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.id == id)
    }

    /// All invariant violations, in annotation order. Overlapping or nested
    /// spans are allowed and not reported.
    pub fn violations(&self, doc: &LegalDocument) -> Vec<AnnotationError> {
        let mut out = Vec::new();
        if self.corpus_id != doc.id {
            out.push(AnnotationError::CorpusMismatch { expected: doc.id.clone(), found: self.corpus_id.clone() });
        }
        let mut seen: Vec<&str> = Vec::new();
        for a in &self.annotations {
            if seen.contains(&a.id.as_str()) {
                out.push(AnnotationError::DuplicateId(a.id.clone()));
            } else {
                seen.push(&a.id);
            }
            if a.span.provision.document != self.corpus_id {
                out.push(AnnotationError::ForeignProvision {
                    id: a.id.clone(),
                    expected: self.corpus_id.clone(),
                    found: a.span.provision.document.clone(),
                });
                continue;
            }
            if a.span.start >= a.span.end {
                out.push(AnnotationError::EmptySpan { id: a.id.clone(), start: a.span.start, end: a.span.end });
                continue;
            }
            match doc.slice(&a.span) {
                Ok(found) if found == a.quote => {}
                Ok(found) => out.push(AnnotationError::QuoteMismatch {
                    id: a.id.clone(),
                    expected: a.quote.clone(),
                    found: found.to_string(),
                }),
                Err(SliceError::Resolve(source)) => {
                    // a document mismatch is already reported at set level
                    if !matches!(source, ResolveError::DocumentMismatch { .. }) {
                        out.push(AnnotationError::UnknownProvision { id: a.id.clone(), source });
                    }
                }
                Err(SliceError::NoBodyText(p)) => {
                    out.push(AnnotationError::NoBodyText { id: a.id.clone(), provision: p.to_string() })
                }
                Err(SliceError::OutOfBounds { provision, start, end, len }) => {
                    out.push(AnnotationError::SpanOutOfBounds {
                        id: a.id.clone(),
                        provision: provision.to_string(),
                        start,
                        end,
                        len,
                    })
                }
            }
        }
        out
    }

    /// Fails with the first invariant violation.
    pub fn check(&self, doc: &LegalDocument) -> Result<(), AnnotationError> {
        match self.violations(doc).into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Diagnostics for every violated annotation invariant; empty iff the set
/// is valid against `doc`.
pub fn validate_annotations(set: &AnnotationSet, doc: &LegalDocument) -> Vec<Diagnostic> {
    set.violations(doc).iter().map(AnnotationError::to_diagnostic).collect()
}
