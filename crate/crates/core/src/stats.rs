//! Median and mode over exact values.

use alloc::vec::Vec;

use crate::ratio::Ratio;

/// Midpoint median: the middle value for odd counts, the mean of the two
/// central values for even counts. `None` for an empty slice.
pub fn median(values: &[Ratio]) -> Option<Ratio> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    let n = sorted.len();
    if n % 2 == 1 {
        Some(sorted[n / 2])
    } else {
        Some(Ratio::midpoint(sorted[n / 2 - 1], sorted[n / 2]))
    }
}

/// Every value reaching the maximal frequency, ascending.
pub fn modes(values: &[Ratio]) -> Vec<Ratio> {
    let mut sorted = values.to_vec();
    sorted.sort();
    let mut runs: Vec<(Ratio, usize)> = Vec::new();
    for v in sorted {
        match runs.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => runs.push((v, 1)),
        }
    }
    let best = runs.iter().map(|(_, c)| *c).max().unwrap_or(0);
    runs.into_iter().filter(|(_, c)| *c == best).map(|(v, _)| v).collect()
}
