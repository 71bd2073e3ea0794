//! Core data model and algorithms for annotating regulatory text, assembling
//! requirements/system content models from the annotations, tracing
//! provisions to specification elements and scoring annotation sets against
//! a gold standard.
//!
//! The crate is `no_std` and only needs `alloc`. Reading and writing files
//! lives in the `lexitrace` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod annotation;
pub mod corpus;
pub mod diagnostic;
pub mod model;
pub mod normalize;
pub mod ratio;
pub mod scoring;
pub mod stats;
pub mod survey;

pub use annotation::{AbstractionLevel, Annotation, AnnotationSet, ConceptKind};
pub use corpus::{Article, LegalDocument, Paragraph, Point, ProvisionRef, Span};
pub use diagnostic::{Diagnostic, Severity};

pub use model::{ContentModel, Declarations, Instance, Relation, RelationKind};
pub use ratio::Ratio;
