//! Frequent-pattern mining over flat conditional tid-list databases.
//!
//! The miner keeps every database level — the root and each conditional
//! database — as one flat integer sequence of transaction-id lists plus
//! four key arrays (names, frequencies, start addresses and a visit-order
//! permutation). Levels nest as enclosed loops driven by an explicit
//! cursor stack: level `i` emits the patterns of length `i`, and a child
//! database is built for each reference element by intersecting candidate
//! lists against a reusable 0/1 transaction template. Optional extras: a
//! statistical-independence filter that prunes patterns explainable by
//! chance, a same-frequency grouping optimization, gap/varint list
//! storage, and level-1 partition parallelism.
//!
//! ```
//! use fpsieve::{build_vertical, mine_collect, ItemId, MiningConfig};
//!
//! let txns = vec![
//!     vec![ItemId(0), ItemId(1)],
//!     vec![ItemId(0), ItemId(1), ItemId(2)],
//!     vec![ItemId(1), ItemId(2)],
//! ];
//! let db = build_vertical(3, &txns);
//! let cfg = MiningConfig { min_support: 2, max_len: 2, ..Default::default() };
//! let (patterns, stats) = mine_collect(&db, &cfg).unwrap();
//! assert_eq!(stats.total_patterns(), patterns.len() as u64);
//! ```

pub mod bench;
pub mod config;
pub mod db;
pub mod encode;
mod error;
pub mod filters;
pub mod generator;
pub mod io;
pub mod level;
pub mod miner;
pub mod oracle;
pub mod pattern;

#[cfg(test)]
pub(crate) mod testutil;

pub use config::MiningConfig;
pub use db::{build_vertical, ItemId, RecordCoding, Tid, VerticalDatabase};
pub use error::{Error, Result};
pub use filters::{independence_check, same_frequency_group, FilterDecision};
pub use generator::{generate_bernoulli, plant_dependency};
pub use level::{compute_rate, LevelContext, ListEncoding, ScratchBuffers};
pub use miner::{build_conditional, mine, mine_collect, mine_parallel, root_context, MiningStats};
pub use oracle::{enumerate_frequent, DEFAULT_ORACLE_BUDGET};
pub use pattern::{GroupBlock, NullSink, Pattern, PatternSink};
