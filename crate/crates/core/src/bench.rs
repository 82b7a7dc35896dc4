//! Parameter sweeps over generated instances, reported as CSV.

use num::rational::Ratio;

use crate::dp::{label_bound, solve};
use crate::error::{Error, Result};
use crate::io::{generate_instance, CapacityMode, GeneratorParams};

pub const CSV_HEADER: [&str; 9] = [
    "n",
    "k",
    "capacity",
    "seed",
    "frontier_size",
    "max_cell",
    "label_bound",
    "comparisons",
    "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapacitySweep {
    Fixed(Vec<u64>),
    Ratio(Ratio<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchSpec {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub capacities: CapacitySweep,
    pub weight_max: u64,
    pub seeds: Vec<u64>,
}

/// Parses a sweep axis: comma-separated values and inclusive `a..b` ranges.
/// An empty string is an empty axis.
pub fn parse_axis(text: &str) -> Result<Vec<u64>> {
    let bad = |part: &str| Error::InvalidParams(format!("bad sweep value `{part}`"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad(part))?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad(part))?;
            if lo > hi {
                return Err(bad(part));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub levels: usize,
    pub capacity: u64,
    pub seed: u64,
    pub frontier_size: usize,
    pub max_cell: usize,
    /// `None` when the bound overflows 128 bits.
    pub label_bound: Option<u128>,
    pub comparisons: u64,
    pub wall_ms: f64,
}

/// Runs the sweep in `n`, `k`, capacity, seed nesting order.
pub fn run(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let capacities: Vec<CapacityMode> = match &spec.capacities {
        CapacitySweep::Fixed(ws) => ws.iter().map(|&w| CapacityMode::Fixed(w)).collect(),
        CapacitySweep::Ratio(r) => vec![CapacityMode::Ratio(*r)],
    };
    let mut rows = Vec::new();
    for &n in &spec.ns {
        for &levels in &spec.ks {
            for &capacity in &capacities {
                for &seed in &spec.seeds {
                    let inst = generate_instance(&GeneratorParams {
                        n,
                        levels,
                        capacity,
                        weight_max: spec.weight_max,
                        seed,
                    })?;
                    let f = solve(&inst)?;
                    rows.push(BenchRow {
                        n,
                        levels,
                        capacity: inst.capacity(),
                        seed,
                        frontier_size: f.labels.len(),
                        max_cell: f.stats.max_cell,
                        label_bound: label_bound(levels, n).ok(),
                        comparisons: f.stats.comparisons,
                        wall_ms: f.stats.elapsed.as_secs_f64() * 1e3,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.levels.to_string(),
            r.capacity.to_string(),
            r.seed.to_string(),
            r.frontier_size.to_string(),
            r.max_cell.to_string(),
            r.label_bound.map_or_else(|| "overflow".to_string(), |b| b.to_string()),
            r.comparisons.to_string(),
            format!("{:.3}", r.wall_ms),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
}
