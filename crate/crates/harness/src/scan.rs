//! Discriminant scans with canonical line-delimited output.

use std::io::Write;

use quadnorm::arith;
use quadnorm::formclass::{minkowski, ClassGroup, Flavor};
use quadnorm::normtest::detect_p_divisibility;
use quadnorm::make_field;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;

/// Largest discriminant for which the Minkowski-bound oracle is attached.
pub const ORACLE_DISC_MAX: i64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRecord {
    /// `ε = (a + b√d)/den`, integers rendered in decimal.
    pub a: String,
    pub b: String,
    pub den: u8,
    pub norm: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeResult {
    pub p: u64,
    pub p_divides_h: bool,
    pub detected: bool,
    pub witness: Option<u64>,
    pub witness_index: Option<u64>,
    pub conductors_tested: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub d: i64,
    pub disc: i64,
    pub h: u64,
    pub h_plus: u64,
    pub elementary_divisors: Vec<u64>,
    pub unit: UnitRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_h: Option<u64>,
    pub primes: Vec<PrimeResult>,
}

impl ScanRecord {
    pub fn for_d(d: i64, cfg: &RunConfig) -> Result<Self> {
        let field = make_field(d)?;
        let group = ClassGroup::new(&field);
        let h = group.h(Flavor::Wide);
        let eps = field.fundamental_unit();
        let primes = cfg
            .primes
            .iter()
            .map(|&p| {
                let verdict = detect_p_divisibility(&field, p, cfg.qmax);
                PrimeResult {
                    p,
                    p_divides_h: h % p == 0,
                    detected: verdict.divisible(),
                    witness: verdict.witness,
                    witness_index: verdict.witness_index,
                    conductors_tested: verdict.conductors_tested.len(),
                }
            })
            .collect();
        Ok(ScanRecord {
            d,
            disc: field.disc(),
            h,
            h_plus: group.h(Flavor::Narrow),
            elementary_divisors: group.structure(Flavor::Wide).elementary_divisors,
            unit: UnitRecord {
                a: eps.value.a().to_string(),
                b: eps.value.b().to_string(),
                den: eps.value.den(),
                norm: eps.unit_norm,
            },
            oracle_h: (cfg.oracle && field.disc() <= ORACLE_DISC_MAX)
                .then(|| minkowski::wide_class_number(field.disc())),
            primes,
        })
    }
}

/// Squarefree `d` in `2..=dmax`, ascending.
pub fn squarefree_range(dmax: u64) -> Vec<i64> {
    (2..=dmax).filter(|&d| arith::is_squarefree(d)).map(|d| d as i64).collect()
}

/// One record per squarefree `d ≤ dmax` in ascending order of `d`,
/// independent of the worker count.
pub fn scan(cfg: &RunConfig) -> Result<Vec<ScanRecord>> {
    squarefree_range(cfg.dmax)
        .into_par_iter()
        .map(|d| ScanRecord::for_d(d, cfg))
        .collect()
}

/// Squarefree `d` whose discriminants are the first `count` real
/// fundamental discriminants.
pub fn first_fundamental(count: usize) -> Vec<i64> {
    let mut bound = 64u64;
    loop {
        let mut ds: Vec<(i64, i64)> = squarefree_range(bound)
            .into_iter()
            .map(|d| (if d % 4 == 1 { d } else { 4 * d }, d))
            .filter(|&(disc, _)| disc <= bound as i64)
            .collect();
        if ds.len() >= count {
            ds.sort_unstable();
            return ds.into_iter().take(count).map(|(_, d)| d).collect();
        }
        bound *= 2;
    }
}

pub fn scan_ds(ds: &[i64], cfg: &RunConfig) -> Result<Vec<ScanRecord>> {
    ds.par_iter().map(|&d| ScanRecord::for_d(d, cfg)).collect()
}

pub fn write_jsonl<W: Write>(records: &[ScanRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl(text: &str) -> Result<Vec<ScanRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    d: i64,
    disc: i64,
    h: u64,
    h_plus: u64,
    elementary_divisors: String,
    unit_a: &'a str,
    unit_b: &'a str,
    unit_den: u8,
    unit_norm: i8,
    p: u64,
    p_divides_h: bool,
    detected: bool,
    witness: Option<u64>,
    witness_index: Option<u64>,
    conductors_tested: usize,
}

/// One row per `(record, p)`.
pub fn write_csv<W: Write>(records: &[ScanRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        let divisors = r
            .elementary_divisors
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        for pr in &r.primes {
            out.serialize(CsvRow {
                d: r.d,
                disc: r.disc,
                h: r.h,
                h_plus: r.h_plus,
                elementary_divisors: divisors.clone(),
                unit_a: &r.unit.a,
                unit_b: &r.unit.b,
                unit_den: r.unit.den,
                unit_norm: r.unit.norm,
                p: pr.p,
                p_divides_h: pr.p_divides_h,
                detected: pr.detected,
                witness: pr.witness,
                witness_index: pr.witness_index,
                conductors_tested: pr.conductors_tested,
            })?;
        }
    }
    out.flush()?;
    Ok(())
}
