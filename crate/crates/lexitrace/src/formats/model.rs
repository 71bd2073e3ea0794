//! Model declarations, built content models and component alias lists.
//!
//! Declarations:
//!
//! ```json
//! {"instances": [{"id": "C2", "name": "consent management service", "concept": "control",
//!   "level": "system", "supported_by": ["A6.2"]}],
//!  "relations": [{"kind": "addresses", "from": "C8", "to": "T1"}]}
//! ```
//!
//! A model file has the same `instances`/`relations` plus `corpus` and the
//! `annotation_sets` it was built from, so it can be checked and traced on
//! its own. Relation kinds: `addresses`, `qualifies`, `depends_on`, `refines`.
//!
//! Aliases are a JSON array of name groups: `[["data access service", "access service"]]`.

use lexitrace_core::annotation::{AbstractionLevel, ConceptKind};
use lexitrace_core::model::{ContentModel, Declarations, Instance, Relation, RelationKind};
use lexitrace_core::scoring::Aliases;
use serde::{Deserialize, Serialize};

use super::annotations::AnnotationSetFile;
use super::{to_json, FormatError};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    id: String,
    name: String,
    concept: String,
    level: String,
    #[serde(default)]
    supported_by: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    kind: String,
    from: String,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    supported_by: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeclarationsFile {
    #[serde(default)]
    instances: Vec<InstanceFile>,
    #[serde(default)]
    relations: Vec<RelationFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    corpus: String,
    instances: Vec<InstanceFile>,
    relations: Vec<RelationFile>,
    annotation_sets: Vec<AnnotationSetFile>,
}

fn instance_from_file(f: InstanceFile) -> Result<Instance, FormatError> {
    let ctx = || format!("instance {}", f.id);
    let concept: ConceptKind = f.concept.parse().map_err(|e| FormatError::field(ctx(), e))?;
    let level: AbstractionLevel = f.level.parse().map_err(|e| FormatError::field(ctx(), e))?;
    Ok(Instance { id: f.id, name: f.name, concept, level, supported_by: f.supported_by })
}

fn instance_to_file(i: &Instance) -> InstanceFile {
    InstanceFile {
        id: i.id.clone(),
        name: i.name.clone(),
        concept: i.concept.tag().to_string(),
        level: i.level.tag().to_string(),
        supported_by: i.supported_by.clone(),
    }
}

fn relation_from_file(f: RelationFile) -> Result<Relation, FormatError> {
    let kind: RelationKind =
        f.kind.parse().map_err(|e| FormatError::field(format!("relation {}->{}", f.from, f.to), e))?;
    Ok(Relation { kind, from: f.from, to: f.to, supported_by: f.supported_by, note: f.note })
}

fn relation_to_file(r: &Relation) -> RelationFile {
    RelationFile {
        kind: r.kind.tag().to_string(),
        from: r.from.clone(),
        to: r.to.clone(),
        supported_by: r.supported_by.clone(),
        note: r.note.clone(),
    }
}

pub fn parse_declarations(input: &str) -> Result<Declarations, FormatError> {
    let file: DeclarationsFile = serde_json::from_str(input)?;
    Ok(Declarations {
        instances: file.instances.into_iter().map(instance_from_file).collect::<Result<_, _>>()?,
        relations: file.relations.into_iter().map(relation_from_file).collect::<Result<_, _>>()?,
    })
}

pub fn serialize_declarations(decls: &Declarations) -> String {
    to_json(&DeclarationsFile {
        instances: decls.instances.iter().map(instance_to_file).collect(),
        relations: decls.relations.iter().map(relation_to_file).collect(),
    })
}

/// Parses a model file. Invariants are not checked here; run
/// [`check_model`](lexitrace_core::model::check_model) on the result.
pub fn parse_model(input: &str) -> Result<ContentModel, FormatError> {
    let file: ModelFile = serde_json::from_str(input)?;
    Ok(ContentModel {
        corpus_id: file.corpus,
        instances: file.instances.into_iter().map(instance_from_file).collect::<Result<_, _>>()?,
        relations: file.relations.into_iter().map(relation_from_file).collect::<Result<_, _>>()?,
        annotation_sets: file.annotation_sets.into_iter().map(AnnotationSetFile::into_set).collect::<Result<_, _>>()?,
    })
}

pub fn serialize_model(model: &ContentModel) -> String {
    to_json(&ModelFile {
        corpus: model.corpus_id.clone(),
        instances: model.instances.iter().map(instance_to_file).collect(),
        relations: model.relations.iter().map(relation_to_file).collect(),
        annotation_sets: model.annotation_sets.iter().map(AnnotationSetFile::from_set).collect(),
    })
}

pub fn parse_aliases(input: &str) -> Result<Aliases, FormatError> {
    let groups: Vec<Vec<String>> = serde_json::from_str(input)?;
    Ok(Aliases::new(groups))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_example() {
        let d = parse_declarations(
            r#"{"instances": [{"id": "C2", "name": "consent management service", "concept": "control",
                "level": "system", "supported_by": ["A6.2"]}],
                "relations": [{"kind": "addresses", "from": "C8", "to": "T1"}]}"#,
        )
        .unwrap();
        assert_eq!(d.instances[0].level, AbstractionLevel::System);
        assert_eq!(d.relations[0].kind, RelationKind::Addresses);
        assert_eq!(parse_declarations(&serialize_declarations(&d)).unwrap(), d);
    }

    #[test]
    fn bad_tags() {
        let err =
            parse_declarations(r#"{"instances": [{"id": "X", "name": "n", "concept": "control", "level": "design"}]}"#)
                .unwrap_err();
        assert!(err.is_syntax() && err.to_string().contains("design"));
        let err = parse_declarations(r#"{"relations": [{"kind": "implements", "from": "a", "to": "b"}]}"#).unwrap_err();
        assert!(err.to_string().contains("implements"));
    }

    #[test]
    fn aliases() {
        let a = parse_aliases(r#"[["Data access service", "access service"]]"#).unwrap();
        assert!(a.equivalent("ACCESS service", "data access service"));
        assert!(parse_aliases(r#"{"a": 1}"#).is_err());
    }
}
