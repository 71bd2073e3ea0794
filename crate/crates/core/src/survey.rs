//! Importance ratings (1..=5, half points allowed) and rankings (1..=5) of
//! the five specification objectives, with median/mode summaries.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::diagnostic::Diagnostic;
use crate::ratio::Ratio;
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Objective {
    /// Capturing legal knowledge.
    SO1,
    /// Traceability and consistency of specifications.
    SO2,
    /// Separation of compliance and non-compliance concerns.
    SO3,
    /// Specification transparency.
    SO4,
    /// Facilitating system flexibility.
    SO5,
}

impl Objective {
    pub const ALL: [Objective; 5] = [Objective::SO1, Objective::SO2, Objective::SO3, Objective::SO4, Objective::SO5];

    pub fn label(&self) -> &'static str {
        match self {
            Objective::SO1 => "SO1",
            Objective::SO2 => "SO2",
            Objective::SO3 => "SO3",
            Objective::SO4 => "SO4",
            Objective::SO5 => "SO5",
        }
    }

    pub fn index(&self) -> usize {
        *self as usize
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A rating on the 1..=5 scale, stored in half points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfPoints(u8);

impl HalfPoints {
    /// `halves` is the value times two (2..=10).
    pub fn from_halves(halves: u8) -> Option<Self> {
        (2..=10).contains(&halves).then_some(HalfPoints(halves))
    }

    pub fn halves(&self) -> u8 {
        self.0
    }

    pub fn value(&self) -> Ratio {
        Ratio::new(i64::from(self.0), 2)
    }
}

impl fmt::Display for HalfPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value(), f)
    }
}

/// A rating cell: the primary value and, where a participant rated two
/// aspects of the objective separately, a secondary one, written `P(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rating {
    pub primary: HalfPoints,
    pub secondary: Option<HalfPoints>,
}

impl Rating {
    /// The secondary value, or the primary one when there is none.
    pub fn secondary_or_primary(&self) -> HalfPoints {
        self.secondary.unwrap_or(self.primary)
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.primary)?;
        if let Some(s) = self.secondary {
            write!(f, "({s})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurveyValueError {
    #[error("malformed value {0:?}")]
    Malformed(String),
    #[error("value {0:?} is outside 1..=5 or not a whole or half point")]
    OutOfRange(String),
}

fn parse_half_points(s: &str, whole: &str) -> Result<HalfPoints, SurveyValueError> {
    let v: Ratio = s.parse().map_err(|_| SurveyValueError::Malformed(whole.to_string()))?;
    let halves = v.numer() * 2;
    if 2 % v.denom() != 0 || halves % v.denom() as i64 != 0 {
        return Err(SurveyValueError::OutOfRange(whole.to_string()));
    }
    u8::try_from(halves / v.denom() as i64)
        .ok()
        .and_then(HalfPoints::from_halves)
        .ok_or_else(|| SurveyValueError::OutOfRange(whole.to_string()))
}

impl FromStr for Rating {
    type Err = SurveyValueError;

    /// `5`, `3.5`, `4(3)`, `3.5(5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.split_once('(') {
            None => Ok(Rating { primary: parse_half_points(t, s)?, secondary: None }),
            Some((p, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| SurveyValueError::Malformed(s.to_string()))?;
                Ok(Rating {
                    primary: parse_half_points(p.trim(), s)?,
                    secondary: Some(parse_half_points(inner.trim(), s)?),
                })
            }
        }
    }
}

/// Parses a rank (whole number in 1..=5).
pub fn parse_rank(s: &str) -> Result<u8, SurveyValueError> {
    let t = s.trim();
    let n: u8 = t.parse().map_err(|_| SurveyValueError::Malformed(s.to_string()))?;
    if (1..=5).contains(&n) {
        Ok(n)
    } else {
        Err(SurveyValueError::OutOfRange(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRecord {
    pub participant: String,
    /// Indexed by [`Objective::index`].
    pub ratings: [Rating; 5],
    /// 1 = most important. Should be a permutation of 1..=5.
    pub rankings: [u8; 5],
}

impl SurveyRecord {
    pub fn rating(&self, o: Objective) -> Rating {
        self.ratings[o.index()]
    }

    pub fn rank(&self, o: Objective) -> u8 {
        self.rankings[o.index()]
    }

    pub fn rankings_are_permutation(&self) -> bool {
        let mut sorted = self.rankings;
        sorted.sort_unstable();
        sorted == [1, 2, 3, 4, 5]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurveyDataset {
    pub records: Vec<SurveyRecord>,
}

/// Warnings only: rankings that are not a permutation of 1..=5, and an
/// objective ranked most important while rated least important.
pub fn validate_survey(ds: &SurveyDataset) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for r in &ds.records {
        if !r.rankings_are_permutation() {
            out.push(Diagnostic::warning(
                r.participant.clone(),
                "ranking-not-permutation",
                alloc::format!("rankings {:?} are not a permutation of 1..5", r.rankings),
            ));
        }
        for o in Objective::ALL {
            if r.rank(o) == 1 && r.rating(o).primary.halves() == 2 {
                out.push(Diagnostic::warning(
                    r.participant.clone(),
                    "rating-ranking-inconsistent",
                    alloc::format!("{o} is ranked most important (1) but rated lowest importance (1)"),
                ));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectiveSummary {
    pub objective: Objective,
    pub rating_median: Ratio,
    pub rating_modes: Vec<Ratio>,
    /// Over secondary values, falling back to the primary value where a
    /// record has no secondary.
    pub secondary_rating_median: Ratio,
    pub secondary_rating_modes: Vec<Ratio>,
    /// Whether any record rated this objective with a secondary value.
    pub has_secondary: bool,
    pub ranking_median: Ratio,
    pub ranking_modes: Vec<Ratio>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveySummary {
    /// In objective order SO1..SO5.
    pub objectives: Vec<ObjectiveSummary>,
}

impl SurveySummary {
    pub fn get(&self, o: Objective) -> &ObjectiveSummary {
        &self.objectives[o.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("survey dataset is empty")]
pub struct EmptySurvey;

pub fn aggregate_survey(ds: &SurveyDataset) -> Result<SurveySummary, EmptySurvey> {
    if ds.records.is_empty() {
        return Err(EmptySurvey);
    }
    let summarize = |values: Vec<Ratio>| -> (Ratio, Vec<Ratio>) {
        (stats::median(&values).unwrap_or(Ratio::ZERO), stats::modes(&values))
    };
    let objectives = Objective::ALL
        .into_iter()
        .map(|o| {
            let ratings: Vec<Rating> = ds.records.iter().map(|r| r.rating(o)).collect();
            let (rating_median, rating_modes) = summarize(ratings.iter().map(|r| r.primary.value()).collect());
            let (secondary_rating_median, secondary_rating_modes) =
                summarize(ratings.iter().map(|r| r.secondary_or_primary().value()).collect());
            let (ranking_median, ranking_modes) =
                summarize(ds.records.iter().map(|r| Ratio::integer(i64::from(r.rank(o)))).collect());
            ObjectiveSummary {
                objective: o,
                rating_median,
                rating_modes,
                secondary_rating_median,
                secondary_rating_modes,
                has_secondary: ratings.iter().any(|r| r.secondary.is_some()),
                ranking_median,
                ranking_modes,
            }
        })
        .collect();
    Ok(SurveySummary { objectives })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: &str, ratings: [&str; 5], rankings: [u8; 5]) -> SurveyRecord {
        SurveyRecord { participant: p.into(), ratings: ratings.map(|r| r.parse().unwrap()), rankings }
    }

    #[test]
    fn parses_dual_values() {
        let r: Rating = "3.5(5)".parse().unwrap();
        assert_eq!(r.primary.value(), Ratio::new(7, 2));
        assert_eq!(r.secondary.unwrap().value(), Ratio::integer(5));
        assert_eq!(r.to_string(), "3.5(5)");
        let r: Rating = "5".parse().unwrap();
        assert_eq!((r.primary.halves(), r.secondary), (10, None));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!("7".parse::<Rating>(), Err(SurveyValueError::OutOfRange(_))));
        assert!(matches!("0.5".parse::<Rating>(), Err(SurveyValueError::OutOfRange(_))));
        assert!(matches!("3.25".parse::<Rating>(), Err(SurveyValueError::OutOfRange(_))));
        assert!(matches!("4(6)".parse::<Rating>(), Err(SurveyValueError::OutOfRange(_))));
        assert!(matches!("4(3".parse::<Rating>(), Err(SurveyValueError::Malformed(_))));
        assert!(matches!("high".parse::<Rating>(), Err(SurveyValueError::Malformed(_))));
        assert!(matches!("-".parse::<Rating>(), Err(SurveyValueError::Malformed(_))));
        assert!(parse_rank("6").is_err());
        assert!(parse_rank("2.5").is_err());
        assert_eq!(parse_rank(" 3 "), Ok(3));
    }

    #[test]
    fn warnings() {
        let ds = SurveyDataset {
            records: alloc::vec![
                rec("ok", ["5", "4", "1", "4", "4"], [1, 2, 5, 3, 4]),
                rec("tie", ["5", "4", "2", "4", "4"], [1, 1, 2, 3, 4]),
                rec("I3", ["4", "3.5", "1", "4(5)", "2"], [3, 4, 1, 2, 5]),
            ],
        };
        let d = validate_survey(&ds);
        let got: Vec<(&str, &str)> = d.iter().map(|d| (d.subject.as_str(), d.code)).collect();
        assert_eq!(got, alloc::vec![("tie", "ranking-not-permutation"), ("I3", "rating-ranking-inconsistent")]);
        assert!(d[1].message.contains("SO3"));
        assert!(d.iter().all(|d| !d.is_error()));
    }

    #[test]
    fn single_record_medians_are_its_values() {
        let ds = SurveyDataset { records: alloc::vec![rec("x", ["3", "2.5(5)", "1", "4", "5"], [2, 1, 5, 3, 4])] };
        let s = aggregate_survey(&ds).unwrap();
        assert_eq!(s.get(Objective::SO2).rating_median, Ratio::new(5, 2));
        assert_eq!(s.get(Objective::SO2).secondary_rating_median, Ratio::integer(5));
        assert_eq!(s.get(Objective::SO1).secondary_rating_median, Ratio::integer(3));
        assert_eq!(s.get(Objective::SO1).ranking_median, Ratio::integer(2));
        assert!(aggregate_survey(&SurveyDataset::default()).is_err());
    }
}
