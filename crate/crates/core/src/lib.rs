//! Solvers for the 0-1 knapsack problem where each item carries a
//! qualitative level (an ordinal grade) instead of a numeric profit.
//!
//! Selections are compared through their per-level item counts. One
//! selection dominates another when it scores at least as high under every
//! strictly increasing positive valuation of the levels, and strictly higher
//! under some. The crate provides:
//!
//! - [`dp::solve`]: every non-dominated count vector with a representative subset;
//! - [`greedy::greedy_r`] / [`greedy::greedy_w`]: single efficient selections in `O(n log n)`;
//! - [`oracle::enumerate_frontier`]: exhaustive reference for small instances;
//! - [`io`]: the text instance format, frontier output and a seeded generator.
//!
//! ```
//! use qknap::{dp, model::{Instance, Item}};
//!
//! let inst = Instance::new(4, 6, vec![
//!     Item::new(1, 1, 1),
//!     Item::new(2, 2, 2),
//!     Item::new(3, 3, 3),
//!     Item::new(4, 4, 4),
//! ]).unwrap();
//! let frontier = dp::solve(&inst).unwrap();
//! assert_eq!(frontier.labels.len(), 2);
//! assert_eq!(frontier.labels[0].vector.counts(), &[0, 1, 0, 1]);
//! ```

pub mod bench;
pub mod dominance;
pub mod dp;
pub mod error;
pub mod greedy;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
