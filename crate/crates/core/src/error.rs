use thiserror::Error;

use crate::model::ItemId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("levels: level count must be ≥ 1")]
    ZeroLevels,

    #[error("item {id}: weight must be ≥ 1")]
    ZeroWeight { id: ItemId },

    #[error("item {id}: level out of range (got {level}, expected 1..={levels})")]
    LevelOutOfRange { id: ItemId, level: u32, levels: usize },

    #[error("item {id}: duplicate item id")]
    DuplicateId { id: ItemId },

    #[error("item {id}: unknown item id")]
    UnknownItem { id: ItemId },

    #[error("subset lists item {id} more than once")]
    RepeatedSubsetItem { id: ItemId },

    #[error("level count mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("oracle refuses {n} items (limit {limit}); use the DP solver or force the enumeration")]
    OracleGuard { n: usize, limit: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
