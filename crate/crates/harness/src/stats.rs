//! Divisibility frequencies against the Cohen–Lenstra predictions.

use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::scan::ScanRecord;

/// Predicted probability, in percent, that `p` divides the class number of
/// a real quadratic field.
pub const COHEN_LENSTRA_PERCENT: [(u64, f64); 4] = [(3, 12.574), (5, 3.772), (7, 1.796), (9, 1.572)];

pub fn predicted_fraction(p: u64) -> Option<f64> {
    COHEN_LENSTRA_PERCENT
        .iter()
        .find(|(q, _)| *q == p)
        .map(|(_, pct)| pct / 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub p: u64,
    pub records: usize,
    pub divisible: usize,
    /// Exact fraction `divisible/records`.
    pub fraction_exact: String,
    pub fraction: String,
    pub predicted: Option<String>,
    pub deviation: Option<String>,
    #[serde(skip)]
    pub observed: f64,
    #[serde(skip)]
    pub abs_deviation: Option<f64>,
}

/// Fraction of records with `p | h`.
pub fn stats(records: &[ScanRecord], p: u64) -> Result<FrequencyReport> {
    if records.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let divisible = records.iter().filter(|r| r.h % p == 0).count();
    let observed = divisible as f64 / records.len() as f64;
    let predicted = predicted_fraction(p);
    let abs_deviation = predicted.map(|x| (observed - x).abs());
    Ok(FrequencyReport {
        p,
        records: records.len(),
        divisible,
        fraction_exact: format!("{divisible}/{}", records.len()),
        fraction: format!("{observed:.6}"),
        predicted: predicted.map(|x| format!("{x:.6}")),
        deviation: abs_deviation.map(|x| format!("{x:.6}")),
        observed,
        abs_deviation,
    })
}

/// Records sorted by discriminant, truncated to the first `count`.
pub fn first_by_disc(records: &[ScanRecord], count: usize) -> Vec<ScanRecord> {
    let mut v = records.to_vec();
    v.sort_by_key(|r| r.disc);
    v.truncate(count);
    v
}
