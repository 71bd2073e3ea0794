//! Rubric scoring of a candidate annotation set against a gold set, plus
//! system-component comparison and per-annotation aggregation.
//!
//! Each gold annotation gets one of five scores:
//!
//! | span     | concept | score |
//! |----------|---------|-------|
//! | exact    | right   | 1     |
//! | exact    | wrong   | 0.9   |
//! | partial  | right   | 0.8   |
//! | partial  | wrong   | 0.7   |
//! | unmatched|         | 0     |
//!
//! Candidates and gold annotations are paired one-to-one. Only pairs on
//! the same provision with at least one shared character are eligible;
//! pairs are taken greedily by overlap size (largest first), ties broken by
//! gold id then candidate id. Candidates left unpaired count as extras.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::annotation::{AbstractionLevel, AnnotationSet};
use crate::model::ContentModel;
use crate::normalize::normalize_name;
use crate::ratio::Ratio;
use crate::stats;

/// Rubric outcome for one gold annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Score {
    Missed,
    PartialSpanWrongConcept,
    PartialSpan,
    ExactSpanWrongConcept,
    Exact,
}

impl Score {
    pub const ALL: [Score; 5] =
        [Score::Missed, Score::PartialSpanWrongConcept, Score::PartialSpan, Score::ExactSpanWrongConcept, Score::Exact];

    pub fn from_outcome(span_exact: bool, concept_match: bool) -> Score {
        match (span_exact, concept_match) {
            (true, true) => Score::Exact,
            (true, false) => Score::ExactSpanWrongConcept,
            (false, true) => Score::PartialSpan,
            (false, false) => Score::PartialSpanWrongConcept,
        }
    }

    /// Value in tenths: 0, 7, 8, 9 or 10.
    pub fn tenths(&self) -> u8 {
        match self {
            Score::Missed => 0,
            Score::PartialSpanWrongConcept => 7,
            Score::PartialSpan => 8,
            Score::ExactSpanWrongConcept => 9,
            Score::Exact => 10,
        }
    }

    pub fn value(&self) -> Ratio {
        Ratio::new(i64::from(self.tenths()), 10)
    }

    pub fn from_value(v: Ratio) -> Option<Score> {
        Score::ALL.into_iter().find(|s| s.value() == v)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value(), f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a rubric score: {0:?} (expected 0, 0.7, 0.8, 0.9 or 1)")]
pub struct ParseScoreError(pub String);

impl FromStr for Score {
    type Err = ParseScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Ratio>().ok().and_then(Score::from_value).ok_or_else(|| ParseScoreError(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchPair {
    pub gold: String,
    pub candidate: String,
    pub span_exact: bool,
    pub concept_match: bool,
    /// Shared characters, at least 1.
    pub overlap: usize,
}

impl MatchPair {
    pub fn score(&self) -> Score {
        Score::from_outcome(self.span_exact, self.concept_match)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreError {
    #[error("candidate set targets corpus {candidate:?} but the gold set targets {gold:?}")]
    CorpusMismatch { candidate: String, gold: String },
}

/// Greedy one-to-one matching. Pairs are returned in gold order.
pub fn match_annotations(candidate: &AnnotationSet, gold: &AnnotationSet) -> Result<Vec<MatchPair>, ScoreError> {
    if candidate.corpus_id != gold.corpus_id {
        return Err(ScoreError::CorpusMismatch {
            candidate: candidate.corpus_id.clone(),
            gold: gold.corpus_id.clone(),
        });
    }
    let mut eligible: Vec<(usize, usize, usize)> = Vec::new();
    for (gi, g) in gold.annotations.iter().enumerate() {
        for (ci, c) in candidate.annotations.iter().enumerate() {
            let overlap = g.span.overlap(&c.span);
            if overlap > 0 {
                eligible.push((overlap, gi, ci));
            }
        }
    }
    eligible.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then_with(|| gold.annotations[a.1].id.cmp(&gold.annotations[b.1].id))
            .then_with(|| candidate.annotations[a.2].id.cmp(&candidate.annotations[b.2].id))
    });

    let mut gold_taken = alloc::vec![false; gold.annotations.len()];
    let mut cand_taken = alloc::vec![false; candidate.annotations.len()];
    let mut chosen: Vec<(usize, MatchPair)> = Vec::new();
    for (overlap, gi, ci) in eligible {
        if gold_taken[gi] || cand_taken[ci] {
            continue;
        }
        gold_taken[gi] = true;
        cand_taken[ci] = true;
        let g = &gold.annotations[gi];
        let c = &candidate.annotations[ci];
        chosen.push((
            gi,
            MatchPair {
                gold: g.id.clone(),
                candidate: c.id.clone(),
                span_exact: g.span == c.span,
                concept_match: g.concept == c.concept,
                overlap,
            },
        ));
    }
    chosen.sort_by_key(|(gi, _)| *gi);
    Ok(chosen.into_iter().map(|(_, p)| p).collect())
}

/// Per-gold scores for one participant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreReport {
    pub participant: String,
    /// One entry per gold annotation, in gold order.
    pub per_gold: Vec<(String, Score)>,
    /// Candidate annotations left unmatched (A+).
    pub extras: usize,
}

impl ScoreReport {
    pub fn get(&self, gold_id: &str) -> Option<Score> {
        self.per_gold.iter().find(|(id, _)| id == gold_id).map(|(_, s)| *s)
    }

    pub fn gold_ids(&self) -> impl Iterator<Item = &str> {
        self.per_gold.iter().map(|(id, _)| id.as_str())
    }

    /// Sum of scores, in tenths.
    pub fn total_tenths(&self) -> u32 {
        self.per_gold.iter().map(|(_, s)| u32::from(s.tenths())).sum()
    }
}

/// Applies the rubric to a matching produced by [`match_annotations`].
pub fn score(matching: &[MatchPair], candidate: &AnnotationSet, gold: &AnnotationSet) -> ScoreReport {
    let per_gold = gold
        .annotations
        .iter()
        .map(|g| {
            let s = matching.iter().find(|p| p.gold == g.id).map(MatchPair::score).unwrap_or(Score::Missed);
            (g.id.clone(), s)
        })
        .collect();
    let matched: BTreeSet<&str> = matching.iter().map(|p| p.candidate.as_str()).collect();
    let extras = candidate.annotations.iter().filter(|c| !matched.contains(c.id.as_str())).count();
    ScoreReport { participant: candidate.author.clone(), per_gold, extras }
}

/// Matches and scores in one step.
pub fn score_sets(candidate: &AnnotationSet, gold: &AnnotationSet) -> Result<ScoreReport, ScoreError> {
    let matching = match_annotations(candidate, gold)?;
    Ok(score(&matching, candidate, gold))
}

/// Groups of component names considered equivalent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Aliases {
    groups: Vec<Vec<String>>,
}

impl Aliases {
    pub fn new(groups: Vec<Vec<String>>) -> Self {
        let groups = groups.into_iter().map(|g| g.iter().map(|n| normalize_name(n)).collect()).collect();
        Aliases { groups }
    }

    pub fn groups(&self) -> &[Vec<String>] {
        &self.groups
    }

    /// Equal after normalization, or listed together in some group.
    pub fn equivalent(&self, a: &str, b: &str) -> bool {
        let (a, b) = (normalize_name(a), normalize_name(b));
        a == b || self.groups.iter().any(|g| g.contains(&a) && g.contains(&b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMatch {
    pub gold_id: String,
    pub name: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentComparison {
    /// One entry per gold system-level instance, in gold order.
    pub per_gold_component: Vec<ComponentMatch>,
    /// Candidate system-level instances matching no gold component (C+).
    pub extras: usize,
}

impl ComponentComparison {
    /// `+`/`-` pattern in gold order.
    pub fn pattern(&self) -> String {
        self.per_gold_component.iter().map(|c| if c.matched { '+' } else { '-' }).collect()
    }
}

/// A gold component is identified when some candidate system-level instance
/// has the same normalized name or an alias of it.
pub fn compare_components(candidate: &ContentModel, gold: &ContentModel, aliases: &Aliases) -> ComponentComparison {
    let system = |m: &ContentModel| -> Vec<(String, String)> {
        m.instances
            .iter()
            .filter(|i| i.level == AbstractionLevel::System)
            .map(|i| (i.id.clone(), i.name.clone()))
            .collect()
    };
    let gold_components = system(gold);
    let cand_components = system(candidate);
    let per_gold_component = gold_components
        .iter()
        .map(|(id, name)| ComponentMatch {
            gold_id: id.clone(),
            name: name.clone(),
            matched: cand_components.iter().any(|(_, c)| aliases.equivalent(c, name)),
        })
        .collect();
    let extras =
        cand_components.iter().filter(|(_, c)| !gold_components.iter().any(|(_, g)| aliases.equivalent(c, g))).count();
    ComponentComparison { per_gold_component, extras }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldAggregate {
    pub gold_id: String,
    pub median: Ratio,
    /// All values of maximal frequency, ascending.
    pub modes: Vec<Ratio>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AggregateError {
    #[error("no score reports to aggregate")]
    Empty,
    #[error("report for {participant:?} covers different gold annotations than the first report")]
    MismatchedGold { participant: String },
}

/// Median and modes per gold annotation across participants, in the gold
/// order of the first report.
pub fn aggregate_scores(reports: &[ScoreReport]) -> Result<Vec<GoldAggregate>, AggregateError> {
    let first = reports.first().ok_or(AggregateError::Empty)?;
    let ids: Vec<&str> = first.gold_ids().collect();
    let id_set: BTreeSet<&str> = ids.iter().copied().collect();
    for r in reports {
        let other: BTreeSet<&str> = r.gold_ids().collect();
        if other != id_set || r.per_gold.len() != ids.len() {
            return Err(AggregateError::MismatchedGold { participant: r.participant.clone() });
        }
    }
    Ok(ids
        .iter()
        .map(|id| {
            let values: Vec<Ratio> = reports.iter().filter_map(|r| r.get(id)).map(|s| s.value()).collect();
            GoldAggregate {
                gold_id: id.to_string(),
                median: stats::median(&values).unwrap_or(Ratio::ZERO),
                modes: stats::modes(&values),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{Annotation, ConceptKind};
    use crate::corpus::Span;
    use alloc::vec;

    fn a(id: &str, prov: &str, start: usize, end: usize, concept: ConceptKind) -> Annotation {
        Annotation {
            id: id.into(),
            span: Span::new(prov.parse().unwrap(), start, end),
            quote: String::new(),
            concept,
            instance_hint: None,
            note: None,
        }
    }

    fn set(author: &str, anns: Vec<Annotation>) -> AnnotationSet {
        AnnotationSet { corpus_id: "GDPR".into(), author: author.into(), annotations: anns }
    }

    use ConceptKind::*;
    const P: &str = "GDPR:Art15(1)";

    #[test]
    fn score_values() {
        let v: Vec<String> = Score::ALL.iter().map(|s| s.to_string()).collect();
        assert_eq!(v, vec!["0", "0.7", "0.8", "0.9", "1"]);
        assert_eq!("0.9".parse::<Score>().unwrap(), Score::ExactSpanWrongConcept);
        assert_eq!("1.0".parse::<Score>().unwrap(), Score::Exact);
        assert!("0.5".parse::<Score>().is_err());
    }

    #[test]
    fn larger_overlap_wins() {
        let gold = set("gold", vec![a("G1", P, 0, 10, ComplianceControl), a("G2", P, 10, 30, ComplianceControl)]);
        let cand = set("c", vec![a("X", P, 5, 25, ComplianceControl)]);
        let m = match_annotations(&cand, &gold).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].gold.as_str(), m[0].overlap), ("G2", 15));
        let r = score(&m, &cand, &gold);
        assert_eq!(r.get("G1"), Some(Score::Missed));
        assert_eq!(r.get("G2"), Some(Score::PartialSpan));
        assert_eq!(r.extras, 0);
    }

    #[test]
    fn tie_breaks_by_gold_then_candidate_id() {
        let gold = set("gold", vec![a("G2", P, 0, 4, Criterion), a("G1", P, 4, 8, Criterion)]);
        let cand = set("c", vec![a("Y", P, 2, 6, Criterion), a("X", P, 2, 6, Criterion)]);
        let m = match_annotations(&cand, &gold).unwrap();
        // both overlaps are 2: G1 is taken first, by X
        assert_eq!(
            m.iter().map(|p| (p.gold.as_str(), p.candidate.as_str())).collect::<Vec<_>>(),
            vec![("G2", "Y"), ("G1", "X")]
        );
    }

    #[test]
    fn different_provisions_never_match() {
        let gold = set("gold", vec![a("G1", P, 0, 10, Criterion)]);
        let cand = set("c", vec![a("X", "GDPR:Art13(1)", 0, 10, Criterion)]);
        let r = score_sets(&cand, &gold).unwrap();
        assert_eq!(r.get("G1"), Some(Score::Missed));
        assert_eq!(r.extras, 1);
    }

    #[test]
    fn corpus_mismatch() {
        let gold = set("gold", vec![]);
        let mut cand = set("c", vec![]);
        cand.corpus_id = "X".into();
        assert!(match_annotations(&cand, &gold).is_err());
    }

    #[test]
    fn aggregate_rejects_mismatched_gold() {
        let r1 = ScoreReport { participant: "a".into(), per_gold: vec![("G1".into(), Score::Exact)], extras: 0 };
        let r2 = ScoreReport { participant: "b".into(), per_gold: vec![("G2".into(), Score::Exact)], extras: 0 };
        assert_eq!(
            aggregate_scores(&[r1.clone(), r2]),
            Err(AggregateError::MismatchedGold { participant: "b".into() })
        );
        assert_eq!(aggregate_scores(&[]), Err(AggregateError::Empty));
        let agg = aggregate_scores(&[r1]).unwrap();
        assert_eq!(agg[0].median, Ratio::integer(1));
    }

    #[test]
    fn aliases_normalize() {
        let al = Aliases::new(vec![vec!["Data Access Service".into(), "access  module".into()]]);
        assert!(al.equivalent("data access service", "ACCESS MODULE"));
        assert!(al.equivalent("x  y", "X Y"));
        assert!(!al.equivalent("data access service", "consent service"));
    }
}
