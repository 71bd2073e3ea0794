//! Survey CSV:
//!
//! ```text
//! participant,SO1,SO2,SO3,SO4,SO5,rank_SO1,rank_SO2,rank_SO3,rank_SO4,rank_SO5
//! I1,3,4(2),4,4(3),4,5,4,2,3,1
//! ```
//!
//! Ratings are whole or half points in 1..=5 with an optional secondary
//! rating in parentheses. Ranks are whole numbers in 1..=5.

use lexitrace_core::survey::{parse_rank, Objective, Rating, SurveyDataset, SurveyRecord};

use super::FormatError;

const HEADER: [&str; 11] =
    ["participant", "SO1", "SO2", "SO3", "SO4", "SO5", "rank_SO1", "rank_SO2", "rank_SO3", "rank_SO4", "rank_SO5"];

pub fn parse_survey(input: &str) -> Result<SurveyDataset, FormatError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(FormatError::field("line 1", format!("expected header {}", HEADER.join(","))));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let ctx = |col: &str| format!("line {line}, column {col}");
        let participant = row[0].to_string();
        if participant.is_empty() {
            return Err(FormatError::field(ctx("participant"), "empty participant"));
        }
        let mut ratings = Vec::with_capacity(5);
        let mut rankings = [0u8; 5];
        for o in Objective::ALL {
            let i = o.index();
            let r: Rating = row[1 + i].parse().map_err(|e| FormatError::field(ctx(o.label()), e))?;
            ratings.push(r);
            rankings[i] = parse_rank(&row[6 + i]).map_err(|e| FormatError::field(ctx(HEADER[6 + i]), e))?;
        }
        records.push(SurveyRecord { participant, ratings: ratings.try_into().expect("five objectives"), rankings });
    }
    Ok(SurveyDataset { records })
}

pub fn serialize_survey(ds: &SurveyDataset) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("write to memory");
    for r in &ds.records {
        let mut row = vec![r.participant.clone()];
        row.extend(r.ratings.iter().map(Rating::to_string));
        row.extend(r.rankings.iter().map(u8::to_string));
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}
