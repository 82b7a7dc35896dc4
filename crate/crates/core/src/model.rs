//! Instance data model: items carrying a weight and a qualitative level,
//! plus the per-level count vectors used to compare selections.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Item identifier, unique within an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u64);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One-based level index: `1` is the worst level, `k` the best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LevelIndex(pub u32);

impl LevelIndex {
    /// Zero-based slot in a count vector.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: ItemId,
    pub weight: u64,
    pub level: LevelIndex,
}

impl Item {
    pub fn new(id: u64, weight: u64, level: u32) -> Self {
        Item {
            id: ItemId(id),
            weight,
            level: LevelIndex(level),
        }
    }
}

/// A validated knapsack instance. Item order is the canonical input order.
#[derive(Debug, Clone)]
pub struct Instance {
    levels: usize,
    capacity: u64,
    items: Vec<Item>,
    positions: HashMap<ItemId, usize>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels && self.capacity == other.capacity && self.items == other.items
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds an instance, rejecting zero levels, zero weights, levels
    /// outside `1..=levels` and duplicate ids.
    pub fn new(levels: usize, capacity: u64, items: Vec<Item>) -> Result<Self> {
        if levels == 0 {
            return Err(Error::ZeroLevels);
        }
        let mut positions = HashMap::with_capacity(items.len());
        for (pos, item) in items.iter().enumerate() {
            check_item(item, levels)?;
            if positions.insert(item.id, pos).is_some() {
                return Err(Error::DuplicateId { id: item.id });
            }
        }
        Ok(Instance {
            levels,
            capacity,
            items,
            positions,
        })
    }

    /// Number of levels `k`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Input position of an item id.
    pub fn position(&self, id: ItemId) -> Result<usize> {
        self.positions
            .get(&id)
            .copied()
            .ok_or(Error::UnknownItem { id })
    }

    pub fn item(&self, id: ItemId) -> Result<&Item> {
        Ok(&self.items[self.position(id)?])
    }

    /// Per-level item counts of `subset`.
    pub fn rank_cardinality_vector(&self, subset: &Subset) -> Result<RankCardinalityVector> {
        let mut counts = vec![0u32; self.levels];
        for &id in subset.ids() {
            counts[self.item(id)?.level.slot()] += 1;
        }
        Ok(RankCardinalityVector(counts))
    }

    pub fn total_weight(&self, subset: &Subset) -> Result<u64> {
        subset
            .ids()
            .iter()
            .try_fold(0u64, |acc, &id| Ok(acc + self.item(id)?.weight))
    }

    pub fn is_feasible(&self, subset: &Subset) -> Result<bool> {
        Ok(self.total_weight(subset)? <= self.capacity)
    }

    /// Subset made of the items at the given input positions.
    pub fn subset_from_positions(&self, positions: impl IntoIterator<Item = usize>) -> Subset {
        let mut ids: Vec<ItemId> = positions.into_iter().map(|p| self.items[p].id).collect();
        ids.sort_unstable();
        ids.dedup();
        Subset { ids }
    }
}

pub(crate) fn check_item(item: &Item, levels: usize) -> Result<()> {
    if item.weight == 0 {
        return Err(Error::ZeroWeight { id: item.id });
    }
    if item.level.0 == 0 || item.level.0 as usize > levels {
        return Err(Error::LevelOutOfRange {
            id: item.id,
            level: item.level.0,
            levels,
        });
    }
    Ok(())
}

/// Selection of items, stored as a sorted id list.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset {
    ids: Vec<ItemId>,
}

impl Subset {
    pub fn new(ids: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut ids: Vec<ItemId> = ids.into_iter().map(ItemId).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedSubsetItem { id: w[0] });
        }
        Ok(Subset { ids })
    }

    pub fn empty() -> Self {
        Subset::default()
    }

    /// Ids in ascending order.
    pub fn ids(&self) -> &[ItemId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, id) in self.ids.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("]")
    }
}

/// Number of selected items per level; `counts()[i]` is the count at level `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankCardinalityVector(pub Vec<u32>);

impl RankCardinalityVector {
    pub fn zeros(levels: usize) -> Self {
        RankCardinalityVector(vec![0; levels])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn levels(&self) -> usize {
        self.0.len()
    }

    /// Total number of items counted.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Add for &RankCardinalityVector {
    type Output = RankCardinalityVector;

    fn add(self, rhs: Self) -> RankCardinalityVector {
        assert_eq!(self.levels(), rhs.levels(), "level count mismatch");
        RankCardinalityVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for RankCardinalityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A count vector together with one subset realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub vector: RankCardinalityVector,
    pub weight: u64,
    pub representative: Subset,
}

impl Label {
    pub fn from_subset(inst: &Instance, subset: Subset) -> Result<Self> {
        Ok(Label {
            vector: inst.rank_cardinality_vector(&subset)?,
            weight: inst.total_weight(&subset)?,
            representative: subset,
        })
    }
}

#[cfg(test)]
pub(crate) use tests::staircase;

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn staircase() -> Instance {
        Instance::new(
            4,
            6,
            vec![
                Item::new(1, 1, 1),
                Item::new(2, 2, 2),
                Item::new(3, 3, 3),
                Item::new(4, 4, 4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn accepts_staircase() {
        let inst = staircase();
        assert_eq!(inst.levels(), 4);
        assert_eq!(inst.capacity(), 6);
        assert_eq!(inst.len(), 4);
    }

    #[test]
    fn rejects_bad_instances() {
        assert_eq!(Instance::new(0, 1, vec![]), Err(Error::ZeroLevels));

        let err = Instance::new(4, 6, vec![Item::new(7, 0, 1)]).unwrap_err();
        assert_eq!(err, Error::ZeroWeight { id: ItemId(7) });
        assert!(err.to_string().contains("weight must be ≥ 1"));
        assert!(err.to_string().contains("item 7"));

        let err = Instance::new(4, 6, vec![Item::new(3, 1, 5)]).unwrap_err();
        assert!(err.to_string().contains("level out of range"));
        assert!(Instance::new(4, 6, vec![Item::new(3, 1, 0)]).is_err());

        let err = Instance::new(2, 6, vec![Item::new(1, 1, 1), Item::new(1, 2, 2)]).unwrap_err();
        assert_eq!(err, Error::DuplicateId { id: ItemId(1) });
    }

    #[test]
    fn zero_capacity_and_empty_item_list_are_valid() {
        let inst = Instance::new(3, 0, vec![]).unwrap();
        assert!(inst.is_empty());
    }

    #[test]
    fn vectors_and_weights() {
        let inst = staircase();
        let s = Subset::new([2, 4]).unwrap();
        assert_eq!(inst.rank_cardinality_vector(&s).unwrap().counts(), &[0, 1, 0, 1]);
        assert_eq!(inst.total_weight(&s).unwrap(), 6);

        let s = Subset::new([1, 2, 3]).unwrap();
        assert_eq!(inst.rank_cardinality_vector(&s).unwrap().counts(), &[1, 1, 1, 0]);
        assert_eq!(inst.total_weight(&s).unwrap(), 6);

        let e = Subset::empty();
        assert_eq!(inst.rank_cardinality_vector(&e).unwrap().counts(), &[0, 0, 0, 0]);
        assert_eq!(inst.total_weight(&e).unwrap(), 0);
    }

    #[test]
    fn unknown_and_repeated_ids() {
        let inst = staircase();
        let s = Subset::new([9]).unwrap();
        assert_eq!(
            inst.rank_cardinality_vector(&s),
            Err(Error::UnknownItem { id: ItemId(9) })
        );
        assert!(inst.total_weight(&s).is_err());
        assert!(Subset::new([1, 1]).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Subset::new([4, 2]).unwrap().to_string(), "[2,4]");
        assert_eq!(Subset::empty().to_string(), "[]");
        assert_eq!(RankCardinalityVector(vec![0, 1, 0, 1]).to_string(), "(0,1,0,1)");
    }
}

