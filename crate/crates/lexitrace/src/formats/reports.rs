//! Tabular report output: score tables, trace matrices and survey summaries,
//! each as CSV and JSON.
//!
//! Score table CSV:
//!
//! ```text
//! participant,A13.1,...,A15.5,A+,C1,...,C6,C+
//! I10,1,0,0.7,...,1,1,+,+,-,-,+,+,3
//! Median,1,0,0.7,...,0.8,,,,,,,,
//! Mode,1,0,"0.7,0.9",...,1,,,,,,,,
//! ```
//!
//! Component columns appear only when at least one row has a component
//! comparison. Multimodal cells list every mode, ascending, comma-joined.

use lexitrace_core::model::TraceMatrix;
use lexitrace_core::scoring::{ComponentComparison, GoldAggregate, Score, ScoreReport};
use lexitrace_core::survey::{Objective, ObjectiveSummary, SurveySummary};
use lexitrace_core::Ratio;
use serde::Serialize;

use super::{to_json, FormatError};

pub const EXTRAS_COLUMN: &str = "A+";
pub const COMPONENT_EXTRAS_COLUMN: &str = "C+";

/// One participant's row of a score table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreRow {
    pub report: ScoreReport,
    pub components: Option<ComponentComparison>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
    pub aggregate: Option<Vec<GoldAggregate>>,
}

impl ScoreTable {
    fn gold_ids(&self) -> Vec<String> {
        self.rows.first().map(|r| r.report.gold_ids().map(str::to_string).collect()).unwrap_or_default()
    }

    fn component_ids(&self) -> Option<Vec<String>> {
        self.rows
            .iter()
            .find_map(|r| r.components.as_ref())
            .map(|c| c.per_gold_component.iter().map(|m| m.gold_id.clone()).collect())
    }
}

pub fn join_ratios(values: &[Ratio]) -> String {
    values.iter().map(Ratio::to_string).collect::<Vec<_>>().join(",")
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn score_table_csv(table: &ScoreTable) -> String {
    let gold = table.gold_ids();
    let comps = table.component_ids();
    let mut header = vec!["participant".to_string()];
    header.extend(gold.iter().cloned());
    header.push(EXTRAS_COLUMN.to_string());
    if let Some(c) = &comps {
        header.extend(c.iter().cloned());
        header.push(COMPONENT_EXTRAS_COLUMN.to_string());
    }
    let comp_width = comps.as_ref().map_or(0, |c| c.len() + 1);
    let mut out = vec![header];
    for row in &table.rows {
        let mut cells = vec![row.report.participant.clone()];
        cells.extend(row.report.per_gold.iter().map(|(_, s)| s.to_string()));
        cells.push(row.report.extras.to_string());
        if comp_width > 0 {
            match &row.components {
                Some(c) => {
                    cells.extend(c.per_gold_component.iter().map(|m| if m.matched { "+" } else { "-" }.to_string()));
                    cells.push(c.extras.to_string());
                }
                None => cells.extend(std::iter::repeat_n(String::new(), comp_width)),
            }
        }
        out.push(cells);
    }
    if let Some(agg) = &table.aggregate {
        for (label, cell) in [
            ("Median", (|g: &GoldAggregate| g.median.to_string()) as fn(&GoldAggregate) -> String),
            ("Mode", |g: &GoldAggregate| join_ratios(&g.modes)),
        ] {
            let mut cells = vec![label.to_string()];
            cells.extend(agg.iter().map(cell));
            cells.extend(std::iter::repeat_n(String::new(), 1 + comp_width));
            out.push(cells);
        }
    }
    csv_string(out)
}

#[derive(Serialize)]
struct ScoreTableJson<'a> {
    participants: Vec<ParticipantJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aggregate: Option<Vec<AggregateJson<'a>>>,
}

#[derive(Serialize)]
struct ParticipantJson<'a> {
    participant: &'a str,
    scores: Vec<GoldScoreJson<'a>>,
    extras: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<ComponentsJson<'a>>,
}

#[derive(Serialize)]
struct GoldScoreJson<'a> {
    gold: &'a str,
    score: String,
}

#[derive(Serialize)]
struct ComponentsJson<'a> {
    matched: Vec<ComponentJson<'a>>,
    extras: usize,
}

#[derive(Serialize)]
struct ComponentJson<'a> {
    gold: &'a str,
    name: &'a str,
    matched: bool,
}

#[derive(Serialize)]
struct AggregateJson<'a> {
    gold: &'a str,
    median: String,
    modes: Vec<String>,
}

/// Scores are written as decimal strings so they survive exactly.
pub fn score_table_json(table: &ScoreTable) -> String {
    to_json(&ScoreTableJson {
        participants: table
            .rows
            .iter()
            .map(|r| ParticipantJson {
                participant: &r.report.participant,
                scores: r
                    .report
                    .per_gold
                    .iter()
                    .map(|(g, s)| GoldScoreJson { gold: g, score: s.to_string() })
                    .collect(),
                extras: r.report.extras,
                components: r.components.as_ref().map(|c| ComponentsJson {
                    matched: c
                        .per_gold_component
                        .iter()
                        .map(|m| ComponentJson { gold: &m.gold_id, name: &m.name, matched: m.matched })
                        .collect(),
                    extras: c.extras,
                }),
            })
            .collect(),
        aggregate: table.aggregate.as_ref().map(|agg| {
            agg.iter()
                .map(|g| AggregateJson {
                    gold: &g.gold_id,
                    median: g.median.to_string(),
                    modes: g.modes.iter().map(Ratio::to_string).collect(),
                })
                .collect()
        }),
    })
}

/// Reads the per-participant annotation scores of a score table. Columns
/// after `A+` and the `Median`/`Mode` rows are ignored.
pub fn parse_score_table(input: &str) -> Result<Vec<ScoreReport>, FormatError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(input.as_bytes());
    let header = reader.headers()?.clone();
    if header.get(0) != Some("participant") {
        return Err(FormatError::field("line 1", "first column must be participant"));
    }
    let extras_col = header
        .iter()
        .position(|h| h == EXTRAS_COLUMN)
        .ok_or_else(|| FormatError::field("line 1", "missing A+ column"))?;
    let gold: Vec<String> = header.iter().skip(1).take(extras_col - 1).map(str::to_string).collect();
    let mut reports = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let participant = row.get(0).unwrap_or_default();
        if participant == "Median" || participant == "Mode" {
            continue;
        }
        if row.len() <= extras_col {
            return Err(FormatError::field(format!("line {line}"), "row is shorter than the header"));
        }
        let per_gold = gold
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let s: Score =
                    row[1 + i].parse().map_err(|e| FormatError::field(format!("line {line}, column {g}"), e))?;
                Ok((g.clone(), s))
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        let extras = row[extras_col].parse().map_err(|_| {
            FormatError::field(format!("line {line}, column A+"), format!("not a count: {:?}", &row[extras_col]))
        })?;
        reports.push(ScoreReport { participant: participant.to_string(), per_gold, extras });
    }
    Ok(reports)
}

pub fn trace_matrix_csv(m: &TraceMatrix) -> String {
    let mut header = vec!["provision".to_string()];
    header.extend(m.columns.iter().map(|c| c.name.clone()));
    let rows = m.rows.iter().zip(&m.cells).map(|(r, cells)| {
        let mut row = vec![r.to_string()];
        row.extend(cells.iter().map(|&c| if c { "1" } else { "0" }.to_string()));
        row
    });
    csv_string(std::iter::once(header).chain(rows))
}

#[derive(Serialize)]
struct TraceMatrixJson<'a> {
    columns: Vec<ColumnJson<'a>>,
    rows: Vec<RowJson<'a>>,
}

#[derive(Serialize)]
struct ColumnJson<'a> {
    id: &'a str,
    name: &'a str,
}

#[derive(Serialize)]
struct RowJson<'a> {
    provision: String,
    cells: &'a [bool],
}

pub fn trace_matrix_json(m: &TraceMatrix) -> String {
    to_json(&TraceMatrixJson {
        columns: m.columns.iter().map(|c| ColumnJson { id: &c.id, name: &c.name }).collect(),
        rows: m.rows.iter().zip(&m.cells).map(|(r, cells)| RowJson { provision: r.to_string(), cells }).collect(),
    })
}

fn rating_median_cell(s: &ObjectiveSummary) -> String {
    if s.has_secondary {
        format!("{}({})", s.rating_median, s.secondary_rating_median)
    } else {
        s.rating_median.to_string()
    }
}

fn rating_mode_cell(s: &ObjectiveSummary) -> String {
    if s.has_secondary {
        format!("{}({})", join_ratios(&s.rating_modes), join_ratios(&s.secondary_rating_modes))
    } else {
        join_ratios(&s.rating_modes)
    }
}

/// `Median` and `Mode` rows over `SO1..SO5` ratings then `rank_SO1..rank_SO5`.
/// Objectives with secondary ratings show the secondary figure in parentheses.
pub fn survey_summary_csv(summary: &SurveySummary) -> String {
    let mut header = vec!["".to_string()];
    header.extend(Objective::ALL.iter().map(|o| o.label().to_string()));
    header.extend(Objective::ALL.iter().map(|o| format!("rank_{}", o.label())));
    let row = |label: &str, rating: fn(&ObjectiveSummary) -> String, rank: fn(&ObjectiveSummary) -> String| {
        let mut cells = vec![label.to_string()];
        cells.extend(Objective::ALL.iter().map(|&o| rating(summary.get(o))));
        cells.extend(Objective::ALL.iter().map(|&o| rank(summary.get(o))));
        cells
    };
    csv_string([
        header,
        row("Median", rating_median_cell, |s| s.ranking_median.to_string()),
        row("Mode", rating_mode_cell, |s| join_ratios(&s.ranking_modes)),
    ])
}

#[derive(Serialize)]
struct ObjectiveJson {
    objective: &'static str,
    rating_median: String,
    rating_modes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    secondary_rating_median: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    secondary_rating_modes: Option<Vec<String>>,
    ranking_median: String,
    ranking_modes: Vec<String>,
}

pub fn survey_summary_json(summary: &SurveySummary) -> String {
    let strings = |v: &[Ratio]| v.iter().map(Ratio::to_string).collect::<Vec<_>>();
    let objectives: Vec<ObjectiveJson> = summary
        .objectives
        .iter()
        .map(|s| ObjectiveJson {
            objective: s.objective.label(),
            rating_median: s.rating_median.to_string(),
            rating_modes: strings(&s.rating_modes),
            secondary_rating_median: s.has_secondary.then(|| s.secondary_rating_median.to_string()),
            secondary_rating_modes: s.has_secondary.then(|| strings(&s.secondary_rating_modes)),
            ranking_median: s.ranking_median.to_string(),
            ranking_modes: strings(&s.ranking_modes),
        })
        .collect();
    to_json(&objectives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexitrace_core::scoring::{aggregate_scores, ComponentMatch};

    fn report(p: &str, scores: &[Score], extras: usize) -> ScoreReport {
        ScoreReport {
            participant: p.to_string(),
            per_gold: scores.iter().enumerate().map(|(i, &s)| (format!("G{}", i + 1), s)).collect(),
            extras,
        }
    }

    #[test]
    fn score_csv_round_trip_with_multimodal_cell() {
        let reports = vec![
            report("P1", &[Score::Exact, Score::PartialSpanWrongConcept], 2),
            report("P2", &[Score::Exact, Score::ExactSpanWrongConcept], 0),
        ];
        let table = ScoreTable {
            aggregate: Some(aggregate_scores(&reports).unwrap()),
            rows: reports.iter().map(|r| ScoreRow { report: r.clone(), components: None }).collect(),
        };
        let csv = score_table_csv(&table);
        assert_eq!(csv, "participant,G1,G2,A+\nP1,1,0.7,2\nP2,1,0.9,0\nMedian,1,0.8,\nMode,1,\"0.7,0.9\",\n");
        assert_eq!(parse_score_table(&csv).unwrap(), reports);
    }

    #[test]
    fn component_columns() {
        let comp = ComponentComparison {
            per_gold_component: vec![
                ComponentMatch { gold_id: "C1".into(), name: "a".into(), matched: true },
                ComponentMatch { gold_id: "C2".into(), name: "b".into(), matched: false },
            ],
            extras: 3,
        };
        let table = ScoreTable {
            rows: vec![
                ScoreRow { report: report("P1", &[Score::Missed], 0), components: Some(comp) },
                ScoreRow { report: report("P2", &[Score::PartialSpan], 1), components: None },
            ],
            aggregate: None,
        };
        let csv = score_table_csv(&table);
        assert_eq!(csv, "participant,G1,A+,C1,C2,C+\nP1,0,0,+,-,3\nP2,0.8,1,,,\n");
        assert_eq!(parse_score_table(&csv).unwrap().len(), 2);
    }

    #[test]
    fn bad_score_cell() {
        let err = parse_score_table("participant,G1,A+\nP1,0.5,0\n").unwrap_err();
        assert!(err.to_string().contains("line 2, column G1"), "{err}");
    }
}
