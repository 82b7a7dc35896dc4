//! Exhaustive reference: enumerate every feasible subset and filter with
//! plain pairwise suffix-sum tests. Slow on purpose and independent of the
//! DP's merge machinery.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::dominance::{canonical_cmp, weakly_dominates};
use crate::dp::{FrontierResult, SolveStats};
use crate::error::{Error, Result};
use crate::model::{Instance, Label, RankCardinalityVector, Subset};

/// Largest instance enumerated without `force`.
pub const ORACLE_LIMIT: usize = 25;
/// Hard ceiling imposed by the 64-bit subset mask.
const MASK_BITS: usize = 63;

/// Every feasible subset, in ascending bitmask order over input positions
/// (bit `p` selects the item at position `p`).
pub fn enumerate_feasible(
    inst: &Instance,
    force: bool,
) -> Result<impl Iterator<Item = Subset> + '_> {
    let n = inst.len();
    if (n > ORACLE_LIMIT && !force) || n > MASK_BITS {
        return Err(Error::OracleGuard {
            n,
            limit: if force { MASK_BITS } else { ORACLE_LIMIT },
        });
    }
    let items = inst.items();
    Ok((0..1u64 << n).filter_map(move |mask| {
        let mut weight = 0u64;
        let mut positions = Vec::new();
        for (p, item) in items.iter().enumerate() {
            if mask >> p & 1 == 1 {
                weight += item.weight;
                positions.push(p);
            }
        }
        (weight <= inst.capacity()).then(|| inst.subset_from_positions(positions))
    }))
}

/// Frontier by brute force: one lightest, smallest-id representative per
/// distinct vector, dominated vectors removed pairwise, canonical order.
pub fn enumerate_frontier(inst: &Instance, force: bool) -> Result<FrontierResult> {
    let started = Instant::now();
    let mut best: BTreeMap<RankCardinalityVector, Label> = BTreeMap::new();
    let mut feasible = 0u64;
    for subset in enumerate_feasible(inst, force)? {
        feasible += 1;
        if subset.is_empty() {
            continue;
        }
        let label = Label::from_subset(inst, subset)?;
        match best.get(&label.vector) {
            Some(held)
                if (held.weight, &held.representative)
                    <= (label.weight, &label.representative) => {}
            _ => {
                best.insert(label.vector.clone(), label);
            }
        }
    }

    let candidates: Vec<Label> = best.into_values().collect();
    let mut comparisons = 0u64;
    let mut labels = Vec::new();
    for cand in &candidates {
        let mut dominated = false;
        for other in &candidates {
            if other.vector == cand.vector {
                continue;
            }
            comparisons += 1;
            if weakly_dominates(&other.vector, &cand.vector)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            labels.push(cand.clone());
        }
    }
    labels.sort_by(canonical_cmp);

    Ok(FrontierResult {
        levels: inst.levels(),
        stats: SolveStats {
            cells: feasible,
            max_cell: labels.len(),
            row_max_cell: Vec::new(),
            comparisons,
            elapsed: started.elapsed(),
        },
        labels,
    })
}
