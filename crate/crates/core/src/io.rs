//! Text formats for instances and frontiers, and the seeded instance generator.
//!
//! Instance files are UTF-8; `#` starts a comment running to end of line and
//! blank lines are ignored:
//!
//! ```text
//! qknap 1
//! levels <k>
//! capacity <W>
//! items <n>
//! <id> <weight> <level>      (n lines)
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use num::rational::Ratio;
use serde::Serialize;

use crate::dp::{FrontierResult, LabelMatrix, SolveStats};
use crate::error::{Error, Result};
use crate::model::{check_item, Instance, Item, Label};
use crate::rng::SplitMix64;

pub const FORMAT_HEADER: &str = "qknap 1";

fn parse_number<T: FromStr>(line: usize, what: &str, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: expected a non-negative integer, got `{token}`")))
}

fn keyword_line(line: usize, tokens: &[&str], keyword: &str) -> Result<u64> {
    match tokens {
        [kw, value] if *kw == keyword => parse_number(line, keyword, value),
        _ => Err(Error::parse(line, format!("expected `{keyword} <value>`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut next = |expect: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(text.lines().count().max(1), format!("unexpected end of input, expected {expect}")))
    };

    let (no, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["qknap", "1"] {
        return Err(Error::parse(no, format!("expected header `{FORMAT_HEADER}`, got `{header}`")));
    }
    let (no, l) = next("levels")?;
    let levels = keyword_line(no, &l.split_whitespace().collect::<Vec<_>>(), "levels")?;
    if levels == 0 {
        return Err(Error::parse(no, Error::ZeroLevels.to_string()));
    }
    let levels = usize::try_from(levels).map_err(|_| Error::parse(no, "levels: too large"))?;
    let (no, l) = next("capacity")?;
    let capacity = keyword_line(no, &l.split_whitespace().collect::<Vec<_>>(), "capacity")?;
    let (no, l) = next("items")?;
    let count = keyword_line(no, &l.split_whitespace().collect::<Vec<_>>(), "items")?;
    let count_line = no;

    let mut items: Vec<Item> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (no, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let [id, weight, level] = tokens[..] else {
            return Err(Error::parse(no, "expected `<id> <weight> <level>`"));
        };
        let item = Item::new(
            parse_number(no, "id", id)?,
            parse_number(no, "weight", weight)?,
            parse_number(no, "level", level)?,
        );
        check_item(&item, levels).map_err(|e| Error::parse(no, e.to_string()))?;
        if let Some(first) = seen.insert(item.id, no) {
            return Err(Error::parse(
                no,
                format!("item {}: duplicate item id (first seen on line {first})", item.id),
            ));
        }
        items.push(item);
    }
    if items.len() as u64 != count {
        return Err(Error::parse(
            count_line,
            format!("item count mismatch: header declares {count}, found {}", items.len()),
        ));
    }
    Instance::new(levels, capacity, items)
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_HEADER}");
    let _ = writeln!(out, "levels {}", inst.levels());
    let _ = writeln!(out, "capacity {}", inst.capacity());
    let _ = writeln!(out, "items {}", inst.len());
    for item in inst.items() {
        let _ = writeln!(out, "{} {} {}", item.id, item.weight, item.level);
    }
    out
}

/// How a generated instance picks its capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMode {
    Fixed(u64),
    /// `W = ⌈ρ · Σ weights⌉` with `0 < ρ ≤ 1`.
    Ratio(Ratio<u64>),
}

/// Parses `p/q` or a decimal such as `0.35` into an exact ratio.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidParams(format!("ratio: cannot parse `{text}`"));
    let text = text.trim();
    let ratio = if let Some((p, q)) = text.split_once('/') {
        let (p, q): (u64, u64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        if q == 0 {
            return Err(bad());
        }
        Ratio::new(p, q)
    } else if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let denom = 10u64.pow(frac.len() as u32);
        let frac: u64 = frac.parse().map_err(|_| bad())?;
        let numer = whole.checked_mul(denom).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Ratio::new(numer, denom)
    } else {
        Ratio::from_integer(text.parse().map_err(|_| bad())?)
    };
    Ok(ratio)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n: usize,
    pub levels: usize,
    pub capacity: CapacityMode,
    pub weight_max: u64,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be ≥ 1".into()));
        }
        if self.levels == 0 {
            return Err(Error::InvalidParams("k must be ≥ 1".into()));
        }
        if self.weight_max == 0 {
            return Err(Error::InvalidParams("weight_max must be ≥ 1".into()));
        }
        if let CapacityMode::Ratio(r) = self.capacity {
            if *r.numer() == 0 || r > Ratio::from_integer(1) {
                return Err(Error::InvalidParams(format!("ratio must lie in (0, 1], got {r}")));
            }
        }
        Ok(())
    }
}

/// Deterministic instance: all weights (items `1..=n`) are drawn first, then
/// all levels, each uniform over its range.
pub fn generate_instance(p: &GeneratorParams) -> Result<Instance> {
    p.validate()?;
    let mut rng = SplitMix64::new(p.seed);
    let weights: Vec<u64> = (0..p.n).map(|_| rng.uniform_inclusive(p.weight_max)).collect();
    let levels: Vec<u64> = (0..p.n).map(|_| rng.uniform_inclusive(p.levels as u64)).collect();
    let capacity = match p.capacity {
        CapacityMode::Fixed(w) => w,
        CapacityMode::Ratio(r) => {
            let total: u128 = weights.iter().map(|&w| u128::from(w)).sum();
            let scaled = total * u128::from(*r.numer());
            let denom = u128::from(*r.denom());
            u64::try_from(scaled.div_ceil(denom)).map_err(|_| Error::Overflow("capacity"))?
        }
    };
    let items = weights
        .iter()
        .zip(&levels)
        .enumerate()
        .map(|(i, (&w, &l))| Item::new(i as u64 + 1, w, l as u32))
        .collect();
    Instance::new(p.levels, capacity, items)
}

fn label_line(out: &mut String, label: &Label) {
    let _ = writeln!(
        out,
        "vector={} weight={} items={}",
        label.vector, label.weight, label.representative
    );
}

fn stats_block(out: &mut String, frontier_size: usize, stats: &SolveStats) {
    let _ = writeln!(out, "# frontier_size={frontier_size}");
    let _ = writeln!(out, "# cells={}", stats.cells);
    let _ = writeln!(out, "# max_cell={}", stats.max_cell);
    let _ = writeln!(out, "# comparisons={}", stats.comparisons);
}

/// One line per label in canonical order, then a `#` stats block. Wall time
/// is left out so output is byte-stable.
pub fn serialize_frontier(f: &FrontierResult) -> String {
    let mut out = String::new();
    for label in &f.labels {
        label_line(&mut out, label);
    }
    stats_block(&mut out, f.labels.len(), &f.stats);
    out
}

/// Frontier lines, then one `cell i=.. x=..` line per table cell, then stats.
pub fn serialize_frontier_with_matrix(f: &FrontierResult, m: &LabelMatrix) -> String {
    let mut out = String::new();
    for label in &f.labels {
        label_line(&mut out, label);
    }
    for i in 0..m.rows() {
        for x in 0..m.columns() {
            let cell: Vec<String> = m.cell(i, x).iter().map(|l| l.vector.to_string()).collect();
            let _ = writeln!(out, "cell i={i} x={x} vectors=[{}]", cell.join(","));
        }
    }
    stats_block(&mut out, f.labels.len(), &f.stats);
    out
}

#[derive(Serialize)]
struct JsonLabel<'a> {
    vector: &'a [u32],
    weight: u64,
    items: Vec<u64>,
}

impl<'a> From<&'a Label> for JsonLabel<'a> {
    fn from(l: &'a Label) -> Self {
        JsonLabel {
            vector: l.vector.counts(),
            weight: l.weight,
            items: l.representative.ids().iter().map(|id| id.0).collect(),
        }
    }
}

#[derive(Serialize)]
struct JsonCell<'a> {
    i: usize,
    x: usize,
    vectors: Vec<&'a [u32]>,
}

#[derive(Serialize)]
struct JsonStats {
    frontier_size: usize,
    cells: u64,
    max_cell: usize,
    comparisons: u64,
}

#[derive(Serialize)]
struct JsonFrontier<'a> {
    frontier: Vec<JsonLabel<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<JsonCell<'a>>>,
    stats: JsonStats,
}

/// JSON mirror of [`serialize_frontier`] / [`serialize_frontier_with_matrix`].
pub fn frontier_json(f: &FrontierResult, m: Option<&LabelMatrix>) -> String {
    let matrix = m.map(|m| {
        (0..m.rows())
            .flat_map(|i| (0..m.columns()).map(move |x| (i, x)))
            .map(|(i, x)| JsonCell {
                i,
                x,
                vectors: m.cell(i, x).iter().map(|l| l.vector.counts()).collect(),
            })
            .collect()
    });
    let doc = JsonFrontier {
        frontier: f.labels.iter().map(JsonLabel::from).collect(),
        matrix,
        stats: JsonStats {
            frontier_size: f.labels.len(),
            cells: f.stats.cells,
            max_cell: f.stats.max_cell,
            comparisons: f.stats.comparisons,
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("frontier serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::staircase;

    const STAIRCASE: &str = "\
qknap 1
# staircase
levels 4
capacity 6
items 4
1 1 1
2 2 2   # level 2
3 3 3

4 4 4
";

    #[test]
    fn parses_staircase() {
        let inst = parse_instance(STAIRCASE).unwrap();
        assert_eq!(inst, staircase());
    }

    #[test]
    fn canonical_serialization() {
        let text = serialize_instance(&parse_instance(STAIRCASE).unwrap());
        assert_eq!(
            text,
            "qknap 1\nlevels 4\ncapacity 6\nitems 4\n1 1 1\n2 2 2\n3 3 3\n4 4 4\n"
        );
        assert_eq!(parse_instance(&text).unwrap(), staircase());
    }

    #[test]
    fn count_mismatch() {
        let text = "qknap 1\nlevels 2\ncapacity 3\nitems 2\n1 1 1\n2 1 1\n3 1 2\n";
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("item count mismatch"), "{err}");
        assert!(matches!(err, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn line_numbered_diagnostics() {
        let cases = [
            ("qknap 2\n", 1, "header"),
            ("qknap 1\nlevels x\n", 2, "levels"),
            ("qknap 1\nlevels 0\n", 2, "level count"),
            ("qknap 1\nlevels 2\nweight 3\n", 3, "capacity"),
            ("qknap 1\nlevels 2\ncapacity 3\nitems 1\n1 0 1\n", 5, "weight must be ≥ 1"),
            ("qknap 1\nlevels 2\ncapacity 3\nitems 1\n1 1 3\n", 5, "level out of range"),
            ("qknap 1\nlevels 2\ncapacity 3\nitems 2\n1 1 1\n1 1 2\n", 6, "duplicate"),
            ("qknap 1\nlevels 2\ncapacity 3\nitems 1\n1 1\n", 5, "<id> <weight> <level>"),
            ("qknap 1\nlevels 2\n", 2, "end of input"),
        ];
        for (text, line, needle) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: got, message }) => {
                    assert_eq!(got, line, "{text:?}: {message}");
                    assert!(message.contains(needle), "{text:?}: {message}");
                }
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("1/2").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_ratio("0.35").unwrap(), Ratio::new(7, 20));
        assert_eq!(parse_ratio("1").unwrap(), Ratio::from_integer(1));
        assert_eq!(parse_ratio(".5").unwrap(), Ratio::new(1, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("abc").is_err());
        assert!(parse_ratio("0.").is_err());
    }

    fn params(n: usize, capacity: CapacityMode, seed: u64) -> GeneratorParams {
        GeneratorParams {
            n,
            levels: 4,
            capacity,
            weight_max: 4,
            seed,
        }
    }

    #[test]
    fn generator_basics() {
        let p = params(4, CapacityMode::Fixed(6), 42);
        let a = serialize_instance(&generate_instance(&p).unwrap());
        let b = serialize_instance(&generate_instance(&p).unwrap());
        assert_eq!(a, b);

        let one = generate_instance(&params(1, CapacityMode::Fixed(3), 9)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.items()[0].id.0, 1);

        let r = generate_instance(&params(10, CapacityMode::Ratio(Ratio::new(1, 3)), 5)).unwrap();
        let total: u64 = r.items().iter().map(|i| i.weight).sum();
        assert_eq!(r.capacity(), total.div_ceil(3));
    }

    #[test]
    fn generator_follows_the_draw_order() {
        let p = params(3, CapacityMode::Fixed(5), 11);
        let inst = generate_instance(&p).unwrap();
        let mut rng = SplitMix64::new(11);
        let w: Vec<u64> = (0..3).map(|_| rng.uniform_inclusive(4)).collect();
        let l: Vec<u64> = (0..3).map(|_| rng.uniform_inclusive(4)).collect();
        for (i, item) in inst.items().iter().enumerate() {
            assert_eq!(item.weight, w[i]);
            assert_eq!(u64::from(item.level.0), l[i]);
        }
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(generate_instance(&params(0, CapacityMode::Fixed(1), 1)).is_err());
        assert!(generate_instance(&params(2, CapacityMode::Ratio(Ratio::new(0, 1)), 1)).is_err());
        assert!(generate_instance(&params(2, CapacityMode::Ratio(Ratio::new(3, 2)), 1)).is_err());
        let mut p = params(2, CapacityMode::Fixed(1), 1);
        p.weight_max = 0;
        assert!(generate_instance(&p).is_err());
    }
}
