//! Exact label-setting dynamic program over item prefixes and capacities.
//!
//! Cell `(i, x)` holds the non-dominated count vectors reachable with the
//! first `i` items and total weight at most `x`, each with one representative
//! subset. Row `i` is built from row `i - 1` alone:
//!
//! ```text
//! cell(i, x) = filter(cell(i-1, x) ∪ extend(cell(i-1, x - w_i), s_i))   if w_i ≤ x
//! cell(i, x) = cell(i-1, x)                                             otherwise
//! ```
//!
//! Row 0 holds the empty selection in every column so that extending it
//! yields the singletons. The empty selection is dominated by every nonempty
//! one, so it only survives in cells where nothing fits, and it is stripped
//! from everything this module reports.
//!
//! Representatives are stored as parent-linked chains in an index arena
//! that is compacted once unreachable nodes pile up.
//!
//! Cells are kept in canonical order (see [`crate::dominance::canonical_cmp`]).
//! Extending a whole cell by one item shifts every key by the same amount,
//! which preserves that order, so each cell is a linear merge of two sorted
//! runs followed by a sweep through a [`DominanceIndex`].

use std::cmp::Ordering;
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dominance::DominanceIndex;
use crate::error::{Error, Result};
use crate::model::{Instance, ItemId, Label, RankCardinalityVector};

/// Counters collected while building a frontier.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Cells evaluated (`n · (W + 1)` for the DP; feasible subsets for the oracle).
    pub cells: u64,
    /// Largest cell, empty selection excluded.
    pub max_cell: usize,
    /// Largest cell per row `i = 0..=n`, empty selection excluded.
    pub row_max_cell: Vec<usize>,
    /// Dominance tests performed.
    pub comparisons: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrontierResult {
    pub levels: usize,
    pub labels: Vec<Label>,
    pub stats: SolveStats,
}

impl FrontierResult {
    pub fn vectors(&self) -> Vec<RankCardinalityVector> {
        self.labels.iter().map(|l| l.vector.clone()).collect()
    }
}

/// Every cell of the table, empty selection stripped. Indexed `[i][x]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelMatrix {
    cells: Vec<Vec<Vec<Label>>>,
}

impl LabelMatrix {
    pub fn cell(&self, i: usize, x: usize) -> &[Label] {
        &self.cells[i][x]
    }

    /// Number of rows (`n + 1`).
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    /// Number of capacity columns (`W + 1`).
    pub fn columns(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }
}

/// `C(k + i, i) - 1`: the most labels a cell in row `i` can hold.
pub fn label_bound(levels: usize, i: usize) -> Result<u128> {
    if levels == 0 {
        return Err(Error::ZeroLevels);
    }
    let k = levels as u128;
    let mut binom: u128 = 1;
    for j in 1..=i as u128 {
        // C(k + j, j) = C(k + j - 1, j - 1) · (k + j) / j, exact at every step
        binom = binom
            .checked_mul(k + j)
            .ok_or(Error::Overflow("label_bound"))?
            / j;
    }
    Ok(binom - 1)
}

const NIL: u32 = u32::MAX;

/// Representative subsets as parent-linked chains: node `j` records the item
/// added last and the node of the label it extended (`NIL` for the empty
/// selection). Nodes only ever point to older nodes.
struct Arena {
    pos: Vec<u32>,
    parent: Vec<u32>,
}

impl Arena {
    fn push(&mut self, pos: usize, parent: u32) -> Result<u32> {
        let id = u32::try_from(self.pos.len())
            .ok()
            .filter(|&id| id != NIL)
            .ok_or(Error::Overflow("label arena"))?;
        self.pos.push(pos as u32);
        self.parent.push(parent);
        Ok(id)
    }

    fn len(&self) -> usize {
        self.pos.len()
    }

    fn positions(&self, mut node: u32) -> Vec<usize> {
        let mut out = Vec::new();
        while node != NIL {
            out.push(self.pos[node as usize] as usize);
            node = self.parent[node as usize];
        }
        out
    }

    fn ids(&self, node: u32, inst: &Instance) -> Vec<ItemId> {
        let mut ids: Vec<ItemId> = self
            .positions(node)
            .into_iter()
            .map(|p| inst.items()[p].id)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Drops nodes unreachable from `row` and renumbers the rest, keeping
    /// their relative order so parents still precede children.
    fn compact(&mut self, row: &mut [Rc<Cell>]) {
        let mut remap = vec![NIL; self.len()];
        for cell in row.iter() {
            for &start in &cell.chains {
                let mut node = start;
                while node != NIL && remap[node as usize] == NIL {
                    remap[node as usize] = 0;
                    node = self.parent[node as usize];
                }
            }
        }
        let mut next = 0u32;
        for old in 0..self.len() {
            if remap[old] == NIL {
                continue;
            }
            let parent = self.parent[old];
            self.pos[next as usize] = self.pos[old];
            self.parent[next as usize] = if parent == NIL { NIL } else { remap[parent as usize] };
            remap[old] = next;
            next += 1;
        }
        self.pos.truncate(next as usize);
        self.parent.truncate(next as usize);
        for cell in row.iter_mut() {
            for node in &mut Rc::make_mut(cell).chains {
                if *node != NIL {
                    *node = remap[*node as usize];
                }
            }
        }
    }
}

#[derive(Clone)]
struct Cell {
    // reversed suffix sums, `levels` entries per label
    keys: Vec<u32>,
    weights: Vec<u64>,
    chains: Vec<u32>,
}

impl Cell {
    fn empty_selection(levels: usize) -> Self {
        Cell {
            keys: vec![0; levels],
            weights: vec![0],
            chains: vec![NIL],
        }
    }

    fn with_capacity(levels: usize, labels: usize) -> Self {
        Cell {
            keys: Vec::with_capacity(levels * labels),
            weights: Vec::with_capacity(labels),
            chains: Vec::with_capacity(labels),
        }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    /// Size with the empty selection excluded.
    fn reported_len(&self) -> usize {
        match self.chains.as_slice() {
            [NIL] => 0,
            _ => self.len(),
        }
    }

    fn push(&mut self, key: &[u32], weight: u64, chain: u32) {
        self.keys.extend_from_slice(key);
        self.weights.push(weight);
        self.chains.push(chain);
    }

    fn to_labels(&self, inst: &Instance, arena: &Arena) -> Vec<Label> {
        let levels = inst.levels();
        (0..self.len())
            .filter(|&j| self.chains[j] != NIL)
            .map(|j| {
                let key = &self.keys[j * levels..(j + 1) * levels];
                let mut counts = vec![0u32; levels];
                // key[t] counts items at level k - t or better
                for t in 0..levels {
                    let above = if t == 0 { 0 } else { key[t - 1] };
                    counts[levels - 1 - t] = key[t] - above;
                }
                Label {
                    vector: RankCardinalityVector(counts),
                    weight: self.weights[j],
                    representative: inst.subset_from_positions(arena.positions(self.chains[j])),
                }
            })
            .collect()
    }
}

struct Builder<'a> {
    inst: &'a Instance,
    arena: Arena,
    index: DominanceIndex,
    shifted: Vec<u32>,
    comparisons: u64,
}

impl Builder<'_> {
    /// Merges `keep` (cell(i-1, x)) with `base` (cell(i-1, x - w)) extended by
    /// item `pos`, whose level touches keys from `first_touched` onward.
    fn merge(
        &mut self,
        keep: &Cell,
        base: &Cell,
        pos: usize,
        first_touched: usize,
        row: u32,
    ) -> Result<Cell> {
        let levels = self.inst.levels();
        let weight = self.inst.items()[pos].weight;
        self.index.reset(row);
        let mut out = Cell::with_capacity(levels, keep.len() + base.len());
        let (mut a, mut b) = (0usize, 0usize);
        let mut shifted_for = usize::MAX;
        while a < keep.len() || b < base.len() {
            if b < base.len() && shifted_for != b {
                self.shifted.clear();
                self.shifted.extend_from_slice(&base.keys[b * levels..(b + 1) * levels]);
                for v in &mut self.shifted[first_touched..] {
                    *v += 1;
                }
                shifted_for = b;
            }
            let take_keep = if a == keep.len() {
                false
            } else if b == base.len() {
                true
            } else {
                let ka = &keep.keys[a * levels..(a + 1) * levels];
                let order = self.shifted.as_slice().cmp(ka).then_with(|| {
                    let wb = base.weights[b] + weight;
                    keep.weights[a].cmp(&wb).then_with(|| {
                        let ids_a = self.arena.ids(keep.chains[a], self.inst);
                        let mut ids_b = self.arena.ids(base.chains[b], self.inst);
                        ids_b.push(self.inst.items()[pos].id);
                        ids_b.sort_unstable();
                        ids_a.cmp(&ids_b)
                    })
                });
                // an equal key on both sides leaves the loser to be dropped
                // by the index as a duplicate
                order != Ordering::Greater
            };
            if take_keep {
                let key = &keep.keys[a * levels..(a + 1) * levels];
                if !self.index.is_dominated(key) {
                    self.index.insert(key);
                    out.push(key, keep.weights[a], keep.chains[a]);
                }
                a += 1;
            } else {
                let key = self.shifted.as_slice();
                if !self.index.is_dominated(key) {
                    self.index.insert(key);
                    let node = self.arena.push(pos, base.chains[b])?;
                    out.push(key, base.weights[b] + weight, node);
                }
                b += 1;
            }
        }
        self.comparisons += self.index.comparisons;
        self.index.comparisons = 0;
        Ok(out)
    }
}

// Arena size below which compaction is not attempted.
const COMPACT_FLOOR: usize = 1 << 20;

fn run(
    inst: &Instance,
    keep_matrix: bool,
    compact_floor: usize,
) -> Result<(FrontierResult, Option<LabelMatrix>)> {
    let started = Instant::now();
    let levels = inst.levels();
    let n = inst.len();
    let width = usize::try_from(inst.capacity())
        .ok()
        .and_then(|w| w.checked_add(1))
        .ok_or(Error::Overflow("capacity"))?;
    let rows = u32::try_from(n).map_err(|_| Error::Overflow("item count"))?;

    let mut builder = Builder {
        inst,
        arena: Arena {
            pos: Vec::new(),
            parent: Vec::new(),
        },
        index: DominanceIndex::new(levels, rows),
        shifted: Vec::with_capacity(levels),
        comparisons: 0,
    };
    let seed = Rc::new(Cell::empty_selection(levels));
    let mut prev: Vec<Rc<Cell>> = vec![seed; width];
    let mut stats = SolveStats {
        row_max_cell: vec![0],
        ..SolveStats::default()
    };
    let mut matrix = keep_matrix.then(|| vec![prev.clone()]);
    let mut compact_at = compact_floor;

    for (pos, item) in inst.items().iter().enumerate() {
        let row = pos as u32 + 1;
        let first_touched = levels - item.level.0 as usize;
        let mut next = Vec::with_capacity(width);
        let mut row_max = 0;
        for x in 0..width {
            let cell = match usize::try_from(item.weight) {
                Ok(w) if w <= x => Rc::new(builder.merge(&prev[x], &prev[x - w], pos, first_touched, row)?),
                _ => Rc::clone(&prev[x]),
            };
            row_max = row_max.max(cell.reported_len());
            next.push(cell);
        }
        stats.cells += width as u64;
        stats.row_max_cell.push(row_max);
        stats.max_cell = stats.max_cell.max(row_max);
        if let Some(m) = matrix.as_mut() {
            m.push(next.clone());
        }
        prev = next;
        // the matrix pins every node, so there is nothing to reclaim
        if matrix.is_none() && builder.arena.len() >= compact_at {
            builder.arena.compact(&mut prev);
            compact_at = compact_floor.max(2 * builder.arena.len());
        }
    }

    stats.comparisons = builder.comparisons;
    let arena = &builder.arena;
    let labels = prev[width - 1].to_labels(inst, arena);
    let matrix = matrix.map(|rows| LabelMatrix {
        cells: rows
            .iter()
            .map(|row| row.iter().map(|c| c.to_labels(inst, arena)).collect())
            .collect(),
    });
    stats.elapsed = started.elapsed();
    Ok((
        FrontierResult {
            levels,
            labels,
            stats,
        },
        matrix,
    ))
}

/// All non-dominated count vectors of `inst`, with one lightest representative each.
pub fn solve(inst: &Instance) -> Result<FrontierResult> {
    run(inst, false, COMPACT_FLOOR).map(|(f, _)| f)
}

/// Like [`solve`], additionally returning every cell of the table.
pub fn solve_with_matrix(inst: &Instance) -> Result<(FrontierResult, LabelMatrix)> {
    let (f, m) = run(inst, true, COMPACT_FLOOR)?;
    Ok((f, m.expect("matrix requested")))
}
