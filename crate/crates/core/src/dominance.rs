//! Dominance between rank cardinality vectors.
//!
//! A vector `a` weakly dominates `b` when every order-preserving positive
//! valuation of the levels scores `a` at least as high as `b`. This holds
//! exactly when the suffix sums of `a` (items at level `j` or better, for
//! every `j`) are componentwise at least those of `b`, which is what every
//! test in this module reduces to. Valuations use exact rationals.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Label, RankCardinalityVector};

/// `sums[j] = counts[j] + counts[j+1] + ... + counts[k-1]` (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SuffixSumVector(pub Vec<u64>);

impl SuffixSumVector {
    pub fn sums(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for SuffixSumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

pub fn suffix_sums(g: &RankCardinalityVector) -> SuffixSumVector {
    let mut sums = vec![0u64; g.levels()];
    let mut acc = 0u64;
    for (slot, &c) in g.counts().iter().enumerate().rev() {
        acc += u64::from(c);
        sums[slot] = acc;
    }
    SuffixSumVector(sums)
}

pub(crate) fn same_levels(a: &RankCardinalityVector, b: &RankCardinalityVector) -> Result<()> {
    if a.levels() != b.levels() {
        return Err(Error::LevelMismatch {
            left: a.levels(),
            right: b.levels(),
        });
    }
    Ok(())
}

fn weakly_dominates_unchecked(a: &RankCardinalityVector, b: &RankCardinalityVector) -> bool {
    let (mut sa, mut sb) = (0u64, 0u64);
    for (&ca, &cb) in a.counts().iter().zip(b.counts()).rev() {
        sa += u64::from(ca);
        sb += u64::from(cb);
        if sa < sb {
            return false;
        }
    }
    true
}

pub fn weakly_dominates(a: &RankCardinalityVector, b: &RankCardinalityVector) -> Result<bool> {
    same_levels(a, b)?;
    Ok(weakly_dominates_unchecked(a, b))
}

/// Weak dominance that is not reciprocated.
pub fn dominates(a: &RankCardinalityVector, b: &RankCardinalityVector) -> Result<bool> {
    same_levels(a, b)?;
    Ok(weakly_dominates_unchecked(a, b) && !weakly_dominates_unchecked(b, a))
}

/// Equal value under every valuation, i.e. identical counts.
pub fn equivalent(a: &RankCardinalityVector, b: &RankCardinalityVector) -> Result<bool> {
    same_levels(a, b)?;
    Ok(a == b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Dominates,
    Dominated,
    Equivalent,
    Incomparable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Dominates => "dominates",
            Verdict::Dominated => "dominated",
            Verdict::Equivalent => "equivalent",
            Verdict::Incomparable => "incomparable",
        })
    }
}

/// Classifies `a` relative to `b`.
pub fn compare(a: &RankCardinalityVector, b: &RankCardinalityVector) -> Result<Verdict> {
    same_levels(a, b)?;
    Ok(
        match (weakly_dominates_unchecked(a, b), weakly_dominates_unchecked(b, a)) {
            (true, true) => Verdict::Equivalent,
            (true, false) => Verdict::Dominates,
            (false, true) => Verdict::Dominated,
            (false, false) => Verdict::Incomparable,
        },
    )
}

/// Strictly increasing, strictly positive rational values, one per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    values: Vec<BigRational>,
}

impl Valuation {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidValuation("no levels".into()));
        }
        if values[0] <= BigRational::zero() {
            return Err(Error::InvalidValuation(format!(
                "value of level 1 must be positive, got {}",
                values[0]
            )));
        }
        if let Some(i) = (1..values.len()).find(|&i| values[i] <= values[i - 1]) {
            return Err(Error::InvalidValuation(format!(
                "values must be strictly increasing (level {} = {} ≤ level {} = {})",
                i + 1,
                values[i],
                i,
                values[i - 1]
            )));
        }
        Ok(Valuation { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Valuation::new(
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn levels(&self) -> usize {
        self.values.len()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Total value `Σ values[i] · counts[i]`.
pub fn evaluate(v: &Valuation, g: &RankCardinalityVector) -> Result<BigRational> {
    if v.levels() != g.levels() {
        return Err(Error::LevelMismatch {
            left: v.levels(),
            right: g.levels(),
        });
    }
    Ok(v.values
        .iter()
        .zip(g.counts())
        .filter(|(_, &c)| c > 0)
        .fold(BigRational::zero(), |acc, (val, &c)| {
            acc + val * BigRational::from_integer(BigInt::from(c))
        }))
}

/// Valuation under which `b` scores strictly higher than `a`, or `None`
/// when `a` weakly dominates `b`.
///
/// Uses the first level `j` (one-based) whose suffix sum favours `b` and
/// assigns `i + M` to levels `i ≥ j` and `i` below, with `M = 4·n·k`.
/// `n` should bound the item count of both vectors; a smaller `n` is raised
/// to that bound.
pub fn falsification_witness(
    a: &RankCardinalityVector,
    b: &RankCardinalityVector,
    n: u64,
) -> Result<Option<Valuation>> {
    same_levels(a, b)?;
    let (sa, sb) = (suffix_sums(a), suffix_sums(b));
    let Some(split) = (0..a.levels()).find(|&j| sa.0[j] < sb.0[j]) else {
        return Ok(None);
    };
    let k = a.levels() as u64;
    let n = n.max(a.total()).max(b.total());
    let m = BigInt::from(4u8) * BigInt::from(n) * BigInt::from(k);
    let values = (0..a.levels())
        .map(|slot| {
            let level = BigInt::from(slot + 1);
            let value = if slot >= split { level + &m } else { level };
            BigRational::from_integer(value)
        })
        .collect();
    let v = Valuation::new(values)?;
    assert!(
        evaluate(&v, b)? > evaluate(&v, a)?,
        "witness valuation {v} fails to separate {a} and {b}"
    );
    Ok(Some(v))
}

/// Canonical vector order: descending on `counts[k-1]`, then `counts[k-2]`, ...
/// Equivalently descending lexicographic on reversed suffix sums, so every
/// dominating vector sorts before the vectors it dominates.
pub fn canonical_vector_cmp(a: &RankCardinalityVector, b: &RankCardinalityVector) -> Ordering {
    b.counts().iter().rev().cmp(a.counts().iter().rev())
}

/// Canonical label order: [`canonical_vector_cmp`], then ascending weight,
/// then ascending sorted id list.
pub fn canonical_cmp(a: &Label, b: &Label) -> Ordering {
    canonical_vector_cmp(&a.vector, &b.vector)
        .then(a.weight.cmp(&b.weight))
        .then_with(|| a.representative.cmp(&b.representative))
}

/// Reversed suffix sums (`key[0]` counts items at the best level).
pub(crate) fn dominance_key(g: &RankCardinalityVector, out: &mut Vec<u32>) {
    out.clear();
    let mut acc = 0u32;
    for &c in g.counts().iter().rev() {
        acc += c;
        out.push(acc);
    }
}

/// Answers "is some inserted key componentwise ≥ this key" for keys fed in
/// descending lexicographic order. Specialized for up to three levels;
/// falls back to a linear scan above that.
#[derive(Debug)]
pub(crate) struct DominanceIndex {
    levels: usize,
    inserted: usize,
    // two levels: max of key[1] seen
    best: u32,
    // three levels: Fenwick tree over (bound - key[1]) holding the max key[2]
    tree: Vec<i64>,
    bound: u32,
    // four or more levels: flat key storage
    keys: Vec<u32>,
    pub comparisons: u64,
}

impl DominanceIndex {
    pub fn new(levels: usize, bound: u32) -> Self {
        let mut idx = DominanceIndex {
            levels,
            inserted: 0,
            best: 0,
            tree: Vec::new(),
            bound: 0,
            keys: Vec::new(),
            comparisons: 0,
        };
        idx.reset(bound);
        idx
    }

    /// Empties the index; `bound` must be at least every key component
    /// that will be inserted or queried.
    pub fn reset(&mut self, bound: u32) {
        self.inserted = 0;
        self.best = 0;
        self.keys.clear();
        if self.levels == 3 {
            self.bound = bound;
            self.tree.clear();
            self.tree.resize(bound as usize + 2, -1);
        }
    }

    pub fn is_dominated(&mut self, key: &[u32]) -> bool {
        debug_assert_eq!(key.len(), self.levels);
        if self.inserted == 0 {
            return false;
        }
        match self.levels {
            1 => {
                self.comparisons += 1;
                true
            }
            2 => {
                self.comparisons += 1;
                self.best >= key[1]
            }
            3 => {
                self.comparisons += 1;
                let mut pos = (self.bound - key[1]) as usize + 1;
                let mut best = -1i64;
                while pos > 0 {
                    best = best.max(self.tree[pos]);
                    pos &= pos - 1;
                }
                best >= i64::from(key[2])
            }
            k => {
                for other in self.keys.chunks_exact(k) {
                    self.comparisons += 1;
                    if other.iter().zip(key).all(|(o, c)| o >= c) {
                        return true;
                    }
                }
                false
            }
        }
    }

    pub fn insert(&mut self, key: &[u32]) {
        self.inserted += 1;
        match self.levels {
            1 => {}
            2 => self.best = self.best.max(key[1]),
            3 => {
                let value = i64::from(key[2]);
                let mut pos = (self.bound - key[1]) as usize + 1;
                while pos < self.tree.len() {
                    if self.tree[pos] < value {
                        self.tree[pos] = value;
                    }
                    pos += pos & pos.wrapping_neg();
                }
            }
            _ => self.keys.extend_from_slice(key),
        }
    }
}

/// Keeps the labels whose vectors no other label dominates, one per
/// distinct vector (least weight, then smallest id list), in canonical order.
pub fn pareto_filter(mut labels: Vec<Label>) -> Result<Vec<Label>> {
    let Some(first) = labels.first() else {
        return Ok(labels);
    };
    let levels = first.vector.levels();
    if let Some(bad) = labels.iter().find(|l| l.vector.levels() != levels) {
        return Err(Error::LevelMismatch {
            left: levels,
            right: bad.vector.levels(),
        });
    }
    labels.sort_by(canonical_cmp);
    labels.dedup_by(|later, earlier| later.vector == earlier.vector);

    let bound = labels
        .iter()
        .map(|l| l.vector.total())
        .max()
        .unwrap_or(0);
    let bound = u32::try_from(bound).map_err(|_| Error::Overflow("pareto_filter"))?;
    let mut index = DominanceIndex::new(levels, bound);
    let mut key = Vec::with_capacity(levels);
    labels.retain(|label| {
        dominance_key(&label.vector, &mut key);
        if index.is_dominated(&key) {
            false
        } else {
            index.insert(&key);
            true
        }
    });
    Ok(labels)
}

/// `2^-e` as an exact rational.
pub(crate) fn inverse_power_of_two(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}
