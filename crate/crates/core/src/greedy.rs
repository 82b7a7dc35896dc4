//! Single-solution greedy fills over two lexicographic item orders.

use std::fmt;

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::dominance::{inverse_power_of_two, same_levels, Valuation};
use crate::error::Result;
use crate::model::{Instance, RankCardinalityVector, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Guarantee {
    /// Efficient unconditionally (level-first order).
    Efficient,
    /// Efficient because the weight-first fill used the whole capacity.
    EfficientBecauseFull,
    /// Weight-first fill left capacity unused; the result may be dominated.
    NoGuarantee,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Guarantee::Efficient => "Efficient",
            Guarantee::EfficientBecauseFull => "EfficientBecauseFull",
            Guarantee::NoGuarantee => "NoGuarantee",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyResult {
    pub subset: Subset,
    pub vector: RankCardinalityVector,
    pub weight: u64,
    pub guarantee: Guarantee,
}

/// Item positions by level descending, then weight ascending, then id.
pub fn r_lex_order(inst: &Instance) -> Vec<usize> {
    let items = inst.items();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (a, b) = (&items[a], &items[b]);
        b.level
            .cmp(&a.level)
            .then(a.weight.cmp(&b.weight))
            .then(a.id.cmp(&b.id))
    });
    order
}

/// Item positions by weight ascending, then level descending, then id.
pub fn w_lex_order(inst: &Instance) -> Vec<usize> {
    let items = inst.items();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (a, b) = (&items[a], &items[b]);
        a.weight
            .cmp(&b.weight)
            .then(b.level.cmp(&a.level))
            .then(a.id.cmp(&b.id))
    });
    order
}

fn fill(inst: &Instance, order: &[usize]) -> (Subset, RankCardinalityVector, u64) {
    let mut remaining = inst.capacity();
    let mut chosen = Vec::new();
    let mut counts = vec![0u32; inst.levels()];
    for &pos in order {
        let item = &inst.items()[pos];
        if item.weight <= remaining {
            remaining -= item.weight;
            counts[item.level.slot()] += 1;
            chosen.push(pos);
        }
    }
    (
        inst.subset_from_positions(chosen),
        RankCardinalityVector(counts),
        inst.capacity() - remaining,
    )
}

/// Greedy fill in level-first order. Always efficient.
pub fn greedy_r(inst: &Instance) -> GreedyResult {
    let (subset, vector, weight) = fill(inst, &r_lex_order(inst));
    GreedyResult {
        subset,
        vector,
        weight,
        guarantee: Guarantee::Efficient,
    }
}

/// Greedy fill in weight-first order. Efficient whenever it fills the knapsack exactly.
pub fn greedy_w(inst: &Instance) -> GreedyResult {
    let (subset, vector, weight) = fill(inst, &w_lex_order(inst));
    let guarantee = if weight == inst.capacity() {
        Guarantee::EfficientBecauseFull
    } else {
        Guarantee::NoGuarantee
    };
    GreedyResult {
        subset,
        vector,
        weight,
        guarantee,
    }
}

/// Valuation under which `chosen` scores strictly above `other`, built from
/// the highest level `j` where the two differ: `2^-(j-i)` below `j`, `n` at
/// `j` and `n + i` above. Applies when `chosen` has more items than `other`
/// at that level, which holds for a level-first greedy result against any
/// other feasible selection; returns `None` otherwise.
pub fn efficiency_witness(
    chosen: &RankCardinalityVector,
    other: &RankCardinalityVector,
    n: u64,
) -> Result<Option<Valuation>> {
    same_levels(chosen, other)?;
    let Some(top) = (0..chosen.levels()).rev().find(|&j| chosen.0[j] != other.0[j]) else {
        return Ok(None);
    };
    if chosen.0[top] < other.0[top] {
        return Ok(None);
    }
    let n = n.max(chosen.total()).max(other.total());
    let values = (0..chosen.levels())
        .map(|slot| match slot.cmp(&top) {
            std::cmp::Ordering::Less => inverse_power_of_two((top - slot) as u32),
            std::cmp::Ordering::Equal => BigRational::from_integer(BigInt::from(n)),
            std::cmp::Ordering::Greater => BigRational::from_integer(BigInt::from(n + slot as u64 + 1)),
        })
        .collect();
    Valuation::new(values).map(Some)
}
