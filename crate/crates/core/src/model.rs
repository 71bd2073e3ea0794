//! The requirements/system content model: concept instances allocated to
//! abstraction levels, typed relations between them, and trace links back
//! to the annotated provisions.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::annotation::{AbstractionLevel, Annotation, AnnotationError, AnnotationSet, ConceptKind};
use crate::corpus::{LegalDocument, ProvisionRef, ResolveError};
use crate::diagnostic::{has_errors, Diagnostic};
use crate::normalize::normalize_name;
use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub id: String,
    pub name: String,
    pub concept: ConceptKind,
    pub level: AbstractionLevel,
    /// Annotation ids grounding this instance in the text.
    pub supported_by: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    /// control → target
    Addresses,
    /// criterion → control or target
    Qualifies,
    /// control → control
    DependsOn,
    /// system-level → requirements-level
    Refines,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] =
        [RelationKind::Addresses, RelationKind::Qualifies, RelationKind::DependsOn, RelationKind::Refines];

    pub fn tag(&self) -> &'static str {
        match self {
            RelationKind::Addresses => "addresses",
            RelationKind::Qualifies => "qualifies",
            RelationKind::DependsOn => "depends_on",
            RelationKind::Refines => "refines",
        }
    }

    /// The typing rule, as reported when it is broken.
    pub fn rule(&self) -> &'static str {
        match self {
            RelationKind::Addresses => "addresses must run from a compliance control to a target of regulation",
            RelationKind::Qualifies => {
                "qualifies must run from a criterion to a compliance control or a target of regulation"
            }
            RelationKind::DependsOn => "depends_on must connect two compliance controls",
            RelationKind::Refines => "refines must run from a system-level instance to a requirements-level instance",
        }
    }

    /// Whether an edge of this kind may connect `from` to `to`.
    pub fn admits(&self, from: &Instance, to: &Instance) -> bool {
        use ConceptKind::*;
        match self {
            RelationKind::Addresses => from.concept == ComplianceControl && to.concept == TargetOfRegulation,
            RelationKind::Qualifies => {
                from.concept == Criterion && matches!(to.concept, ComplianceControl | TargetOfRegulation)
            }
            RelationKind::DependsOn => from.concept == ComplianceControl && to.concept == ComplianceControl,
            RelationKind::Refines => {
                from.level == AbstractionLevel::System && to.level == AbstractionLevel::Requirements
            }
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown relation kind {0:?}")]
pub struct UnknownRelationKind(pub String);

impl FromStr for RelationKind {
    type Err = UnknownRelationKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationKind::ALL.into_iter().find(|k| k.tag() == s).ok_or_else(|| UnknownRelationKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub from: String,
    pub to: String,
    pub supported_by: Option<Vec<String>>,
    pub note: Option<String>,
}

impl Relation {
    pub fn new(kind: RelationKind, from: &str, to: &str) -> Self {
        Relation { kind, from: from.to_string(), to: to.to_string(), supported_by: None, note: None }
    }

    fn label(&self) -> String {
        alloc::format!("{} {}->{}", self.kind, self.from, self.to)
    }
}

/// Authored instances and relations. Instance `supported_by` lists may be
/// empty here; annotations naming the instance through their
/// `instance_hint` are bound at build time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Declarations {
    pub instances: Vec<Instance>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentModel {
    pub corpus_id: String,
    pub instances: Vec<Instance>,
    pub relations: Vec<Relation>,
    pub annotation_sets: Vec<AnnotationSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("annotation set by {author:?}: {source}")]
    Annotations { author: String, source: AnnotationError },
    #[error("annotation set targets corpus {found:?}, model targets {expected:?}")]
    CorpusMismatch { expected: String, found: String },
    #[error("annotation id {0:?} appears in more than one place")]
    DuplicateAnnotationId(String),
    #[error("duplicate instance id {0:?}")]
    DuplicateInstanceId(String),
    #[error("instance {0:?} has an empty name")]
    EmptyName(String),
    #[error("instances {first:?} and {second:?} share the name {name:?}")]
    DuplicateInstanceName { name: String, first: String, second: String },
    #[error("instance {0:?} is not supported by any annotation")]
    Ungrounded(String),
    #[error("{owner} references unknown annotation {annotation:?}")]
    UnknownAnnotation { owner: String, annotation: String },
    #[error("relation {relation} references unknown instance {instance:?}")]
    UnknownEndpoint { relation: String, instance: String },
    #[error("relation {0} is a self-loop")]
    SelfLoop(String),
    #[error("relation {0} is declared more than once")]
    DuplicateRelation(String),
    #[error("relation {relation} violates typing rule: {rule}")]
    KindTyping { relation: String, rule: &'static str },
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::Annotations { .. } => "invalid-annotations",
            ModelError::CorpusMismatch { .. } => "corpus-mismatch",
            ModelError::DuplicateAnnotationId(_) => "duplicate-annotation-id",
            ModelError::DuplicateInstanceId(_) => "duplicate-instance-id",
            ModelError::EmptyName(_) => "empty-name",
            ModelError::DuplicateInstanceName { .. } => "duplicate-instance-name",
            ModelError::Ungrounded(_) => "ungrounded-instance",
            ModelError::UnknownAnnotation { .. } => "unknown-annotation",
            ModelError::UnknownEndpoint { .. } => "unknown-instance",
            ModelError::SelfLoop(_) => "self-loop",
            ModelError::DuplicateRelation(_) => "duplicate-relation",
            ModelError::KindTyping { .. } => "kind-typing",
        }
    }

    pub fn subject(&self) -> String {
        match self {
            ModelError::Annotations { author, source } => alloc::format!("{author}/{}", source.subject()),
            ModelError::CorpusMismatch { found, .. } => found.clone(),
            ModelError::DuplicateAnnotationId(id)
            | ModelError::DuplicateInstanceId(id)
            | ModelError::EmptyName(id)
            | ModelError::Ungrounded(id) => id.clone(),
            ModelError::DuplicateInstanceName { second, .. } => second.clone(),
            ModelError::UnknownAnnotation { owner, .. } => owner.clone(),
            ModelError::UnknownEndpoint { relation, .. }
            | ModelError::SelfLoop(relation)
            | ModelError::DuplicateRelation(relation)
            | ModelError::KindTyping { relation, .. } => relation.clone(),
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.subject(), self.code(), self.to_string())
    }
}

/// Assembles a content model from validated annotation sets and authored
/// declarations.
///
/// Annotations are bound to instances through explicit `supported_by`
/// lists first. An annotation that no declaration lists is bound to the
/// instance whose normalized name equals its normalized `instance_hint`;
/// an annotation listed by a declaration ignores its hint.
pub fn build_model(
    sets: &[AnnotationSet],
    decls: &Declarations,
    doc: &LegalDocument,
) -> Result<ContentModel, ModelError> {
    for set in sets {
        set.check(doc).map_err(|source| ModelError::Annotations { author: set.author.clone(), source })?;
    }
    let mut model = ContentModel {
        corpus_id: doc.id.clone(),
        instances: decls.instances.clone(),
        relations: decls.relations.clone(),
        annotation_sets: sets.to_vec(),
    };

    let declared: BTreeSet<&str> =
        decls.instances.iter().flat_map(|i| i.supported_by.iter().map(String::as_str)).collect();
    let names: Vec<String> = model.instances.iter().map(|i| normalize_name(&i.name)).collect();
    let mut bindings: Vec<(usize, String)> = Vec::new();
    for a in model.annotations() {
        if declared.contains(a.id.as_str()) {
            continue;
        }
        let Some(hint) = &a.instance_hint else { continue };
        let hint = normalize_name(hint);
        if let Some(idx) = names.iter().position(|n| *n == hint) {
            bindings.push((idx, a.id.clone()));
        }
    }
    for (idx, id) in bindings {
        let inst = &mut model.instances[idx];
        if !inst.supported_by.contains(&id) {
            inst.supported_by.push(id);
        }
    }

    match model.violations().into_iter().next() {
        Some(e) => Err(e),
        None => Ok(model),
    }
}

impl ContentModel {
    pub fn empty(corpus_id: &str) -> Self {
        ContentModel {
            corpus_id: corpus_id.to_string(),
            instances: Vec::new(),
            relations: Vec::new(),
            annotation_sets: Vec::new(),
        }
    }

    pub fn annotations(&self) -> impl Iterator<Item = &Annotation> {
        self.annotation_sets.iter().flat_map(|s| s.annotations.iter())
    }

    pub fn annotation(&self, id: &str) -> Option<&Annotation> {
        self.annotations().find(|a| a.id == id)
    }

    pub fn instance(&self, id: &str) -> Option<&Instance> {
        self.instances.iter().find(|i| i.id == id)
    }

    /// Every structural invariant violation, in a stable order.
    pub fn violations(&self) -> Vec<ModelError> {
        let mut out = Vec::new();

        for set in &self.annotation_sets {
            if set.corpus_id != self.corpus_id {
                out.push(ModelError::CorpusMismatch { expected: self.corpus_id.clone(), found: set.corpus_id.clone() });
            }
        }
        let mut ann_ids: BTreeSet<&str> = BTreeSet::new();
        for a in self.annotations() {
            if !ann_ids.insert(&a.id) {
                out.push(ModelError::DuplicateAnnotationId(a.id.clone()));
            }
        }

        let mut inst_ids: BTreeSet<&str> = BTreeSet::new();
        let mut names: Vec<(String, &str)> = Vec::new();
        for inst in &self.instances {
            if !inst_ids.insert(&inst.id) {
                out.push(ModelError::DuplicateInstanceId(inst.id.clone()));
            }
            let norm = normalize_name(&inst.name);
            if norm.is_empty() {
                out.push(ModelError::EmptyName(inst.id.clone()));
            } else if let Some((_, first)) = names.iter().find(|(n, _)| *n == norm) {
                out.push(ModelError::DuplicateInstanceName {
                    name: inst.name.clone(),
                    first: first.to_string(),
                    second: inst.id.clone(),
                });
            } else {
                names.push((norm, &inst.id));
            }
            if inst.supported_by.is_empty() {
                out.push(ModelError::Ungrounded(inst.id.clone()));
            }
            for ann in &inst.supported_by {
                if !ann_ids.contains(ann.as_str()) {
                    out.push(ModelError::UnknownAnnotation { owner: inst.id.clone(), annotation: ann.clone() });
                }
            }
        }

        let mut seen: BTreeSet<(RelationKind, &str, &str)> = BTreeSet::new();
        for rel in &self.relations {
            let label = rel.label();
            let from = self.instance(&rel.from);
            let to = self.instance(&rel.to);
            for (end, found) in [(&rel.from, from), (&rel.to, to)] {
                if found.is_none() {
                    out.push(ModelError::UnknownEndpoint { relation: label.clone(), instance: end.clone() });
                }
            }
            if rel.from == rel.to {
                out.push(ModelError::SelfLoop(label.clone()));
            }
            if !seen.insert((rel.kind, &rel.from, &rel.to)) {
                out.push(ModelError::DuplicateRelation(label.clone()));
            }
            if let (Some(f), Some(t)) = (from, to) {
                if !rel.kind.admits(f, t) {
                    out.push(ModelError::KindTyping { relation: label.clone(), rule: rel.kind.rule() });
                }
            }
            for ann in rel.supported_by.iter().flatten() {
                if !ann_ids.contains(ann.as_str()) {
                    out.push(ModelError::UnknownAnnotation { owner: label.clone(), annotation: ann.clone() });
                }
            }
        }
        out
    }

    /// Annotation ids bound to at least one instance.
    fn bound_annotations(&self) -> BTreeSet<&str> {
        self.instances.iter().flat_map(|i| i.supported_by.iter().map(String::as_str)).collect()
    }

    /// One link per (instance, supporting annotation) whose annotation exists.
    pub fn trace_links(&self) -> Vec<TraceLink> {
        let mut out = Vec::new();
        for inst in &self.instances {
            for ann_id in &inst.supported_by {
                if let Some(a) = self.annotation(ann_id) {
                    out.push(TraceLink {
                        provision: a.span.provision.clone(),
                        instance: inst.id.clone(),
                        via: a.id.clone(),
                    });
                }
            }
        }
        out
    }

    /// Forward trace without checking that `target` exists in a corpus;
    /// only the document id is compared. See [`trace_forward`].
    pub fn trace_forward(&self, target: &ProvisionRef) -> Result<ForwardTrace, TraceError> {
        if target.document != self.corpus_id {
            return Err(TraceError::Resolve(ResolveError::DocumentMismatch {
                expected: self.corpus_id.clone(),
                found: target.document.clone(),
            }));
        }
        let direct: Vec<&Instance> = self
            .instances
            .iter()
            .filter(|inst| {
                inst.supported_by
                    .iter()
                    .any(|id| self.annotation(id).is_some_and(|a| target.contains(&a.span.provision)))
            })
            .collect();
        let is_direct = |id: &str| direct.iter().any(|i| i.id == id);

        let mut result = ForwardTrace::default();
        for inst in &self.instances {
            let traced = |indirect| TracedInstance { id: inst.id.clone(), name: inst.name.clone(), indirect };
            match inst.level {
                AbstractionLevel::Requirements if is_direct(&inst.id) => result.requirements.push(traced(false)),
                AbstractionLevel::Requirements => {}
                AbstractionLevel::System if is_direct(&inst.id) => result.components.push(traced(false)),
                AbstractionLevel::System => {
                    let refines_direct_requirement = self.relations.iter().any(|r| {
                        r.kind == RelationKind::Refines
                            && r.from == inst.id
                            && direct.iter().any(|d| d.id == r.to && d.level == AbstractionLevel::Requirements)
                    });
                    if refines_direct_requirement {
                        result.components.push(traced(true));
                    }
                }
            }
        }
        Ok(result)
    }
}

/// A provision → annotation → instance link. Always derived from the
/// model, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLink {
    pub provision: ProvisionRef,
    pub instance: String,
    pub via: String,
}

/// Errors first, then warnings: criteria that qualify nothing, system-level
/// controls with neither `addresses` nor `refines` edges, and provisions
/// whose annotations are all unbound.
pub fn check_model(model: &ContentModel) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = model.violations().iter().map(ModelError::to_diagnostic).collect();

    let outgoing =
        |id: &str, kind: RelationKind| model.relations.iter().filter(|r| r.from == id && r.kind == kind).count();
    for inst in &model.instances {
        if inst.concept == ConceptKind::Criterion && outgoing(&inst.id, RelationKind::Qualifies) == 0 {
            out.push(Diagnostic::warning(
                inst.id.clone(),
                "criterion-unqualified",
                alloc::format!("criterion {:?} qualifies no control or target", inst.name),
            ));
        }
        if inst.concept == ConceptKind::ComplianceControl
            && inst.level == AbstractionLevel::System
            && outgoing(&inst.id, RelationKind::Addresses) == 0
            && outgoing(&inst.id, RelationKind::Refines) == 0
        {
            out.push(Diagnostic::warning(
                inst.id.clone(),
                "control-unlinked",
                alloc::format!(
                    "system-level control {:?} neither addresses a target nor refines a requirement",
                    inst.name
                ),
            ));
        }
    }

    let bound = model.bound_annotations();
    let mut provisions: Vec<(&ProvisionRef, bool)> = Vec::new();
    for a in model.annotations() {
        let is_bound = bound.contains(a.id.as_str());
        match provisions.iter_mut().find(|(p, _)| **p == a.span.provision) {
            Some((_, any)) => *any |= is_bound,
            None => provisions.push((&a.span.provision, is_bound)),
        }
    }
    provisions.sort_by(|a, b| a.0.cmp(b.0));
    for (p, any_bound) in provisions {
        if !any_bound {
            out.push(Diagnostic::warning(
                p.to_string(),
                "provision-unbound",
                alloc::format!("annotations on {p} are not bound to any instance"),
            ));
        }
    }
    out
}

/// Instances split by abstraction level, each in model order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecDerivation {
    pub requirements: Vec<Instance>,
    pub components: Vec<Instance>,
}

impl SpecDerivation {
    /// Requirements followed by components.
    pub fn ordered(&self) -> impl Iterator<Item = &Instance> {
        self.requirements.iter().chain(self.components.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("model has {} error(s); first: {}", .0.len(), .0.first().map(|d| d.message.as_str()).unwrap_or(""))]
pub struct DeriveError(pub Vec<Diagnostic>);

fn partition(model: &ContentModel) -> SpecDerivation {
    let (requirements, components) =
        model.instances.iter().cloned().partition(|i| i.level == AbstractionLevel::Requirements);
    SpecDerivation { requirements, components }
}

/// Requirements and system components of a model free of errors.
pub fn derive_specs(model: &ContentModel) -> Result<SpecDerivation, DeriveError> {
    let diags = check_model(model);
    if has_errors(&diags) {
        return Err(DeriveError(diags.into_iter().filter(Diagnostic::is_error).collect()));
    }
    Ok(partition(model))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedInstance {
    pub id: String,
    pub name: String,
    /// Reached only through a `refines` edge to a traced requirement.
    pub indirect: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForwardTrace {
    pub requirements: Vec<TracedInstance>,
    pub components: Vec<TracedInstance>,
}

impl ForwardTrace {
    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty() && self.components.is_empty()
    }

    /// Instances supported by text inside the provision (not `indirect`).
    pub fn direct(&self) -> impl Iterator<Item = &TracedInstance> {
        self.requirements.iter().chain(self.components.iter()).filter(|t| !t.indirect)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error("unknown instance {0:?}")]
    UnknownInstance(String),
}

/// Instances supported by annotations inside `target` or its descendants,
/// split by level. Components that refine one of those requirements are
/// added with `indirect` set.
pub fn trace_forward(
    model: &ContentModel,
    doc: &LegalDocument,
    target: &ProvisionRef,
) -> Result<ForwardTrace, TraceError> {
    doc.resolve(target)?;
    model.trace_forward(target)
}

/// Distinct provisions of the instance's supporting annotations, in
/// document order.
pub fn trace_backward(model: &ContentModel, instance_id: &str) -> Result<Vec<ProvisionRef>, TraceError> {
    let inst = model.instance(instance_id).ok_or_else(|| TraceError::UnknownInstance(instance_id.to_string()))?;
    let set: BTreeSet<ProvisionRef> =
        inst.supported_by.iter().filter_map(|id| model.annotation(id)).map(|a| a.span.provision.clone()).collect();
    Ok(set.into_iter().collect())
}

/// Provision × instance incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMatrix {
    pub rows: Vec<ProvisionRef>,
    pub columns: Vec<Instance>,
    /// `cells[row][column]`
    pub cells: Vec<Vec<bool>>,
}

impl TraceMatrix {
    pub fn row_count(&self, row: usize) -> usize {
        self.cells[row].iter().filter(|c| **c).count()
    }
}

/// Rows are `doc.list_provisions()`, columns the instances in derivation
/// order. A cell is set when the instance is traced to the row provision
/// or to one of its descendants, so an article row aggregates its
/// paragraphs and points.
pub fn trace_matrix(model: &ContentModel, doc: &LegalDocument) -> TraceMatrix {
    let rows = doc.list_provisions();
    let derivation = partition(model);
    let columns: Vec<Instance> = derivation.ordered().cloned().collect();
    let backward: Vec<Vec<ProvisionRef>> =
        columns.iter().map(|i| trace_backward(model, &i.id).unwrap_or_default()).collect();
    let cells =
        rows.iter().map(|row| backward.iter().map(|refs| refs.iter().any(|p| row.contains(p))).collect()).collect();
    TraceMatrix { rows, columns, cells }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: Vec<ProvisionRef>,
    pub uncovered: Vec<ProvisionRef>,
    /// covered / total; 0 when the corpus has no body text.
    pub ratio: Ratio,
}

/// Splits the body-text provisions of `doc` by whether at least one of
/// their annotations is bound to an instance.
pub fn coverage(model: &ContentModel, doc: &LegalDocument) -> CoverageReport {
    let bound = model.bound_annotations();
    let (covered, uncovered): (Vec<ProvisionRef>, Vec<ProvisionRef>) = doc
        .text_provisions()
        .into_iter()
        .partition(|p| model.annotations().any(|a| a.span.provision == *p && bound.contains(a.id.as_str())));
    let total = covered.len() + uncovered.len();
    let ratio = if total == 0 { Ratio::ZERO } else { Ratio::new(covered.len() as i64, total as u64) };
    CoverageReport { covered, uncovered, ratio }
}
