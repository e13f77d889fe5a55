//! Brute-force reference miner for desk-scale correctness checks.
//!
//! Deliberately shares nothing with the sieve: transactions become bitmasks
//! and every candidate itemset is counted by a full scan. Cost grows with
//! the number of item combinations, so an explicit budget guards against
//! accidental blow-ups.

use std::collections::HashMap;

use itertools::Itertools;

use crate::db::{ItemId, VerticalDatabase};
use crate::{Error, Result};

/// Default cap on the number of enumerated candidate itemsets.
pub const DEFAULT_ORACLE_BUDGET: u128 = 2_000_000;

/// Exact support of every itemset of size `1..=max_len` with support at
/// least `min_support`, keyed by the itemset sorted ascending.
///
/// Fails with [`Error::OracleBudget`] when the candidate count
/// `Σ C(M, k)` exceeds `budget`, and refuses databases with more than 127
/// items (one bitmask word per transaction).
pub fn enumerate_frequent(
    db: &VerticalDatabase,
    min_support: u32,
    max_len: u32,
    budget: u128,
) -> Result<HashMap<Vec<ItemId>, u32>> {
    let m = db.item_count();
    if m > 127 {
        return Err(Error::Config(format!("oracle supports at most 127 items, got {m}")));
    }
    let depth = (max_len as usize).min(m);
    let needed = candidate_count(m, depth);
    if needed > budget {
        return Err(Error::OracleBudget { needed, budget });
    }

    let masks: Vec<u128> = {
        let mut masks = vec![0u128; db.transaction_count() as usize];
        for i in 0..m {
            for &tid in db.tid_list(ItemId(i as u32)) {
                masks[(tid - 1) as usize] |= 1 << i;
            }
        }
        masks
    };

    let mut out = HashMap::new();
    for k in 1..=depth {
        for combo in (0..m).combinations(k) {
            let mask: u128 = combo.iter().map(|&i| 1u128 << i).sum();
            let support = masks.iter().filter(|&&t| t & mask == mask).count() as u32;
            if support >= min_support {
                let items: Vec<ItemId> = combo.into_iter().map(|i| ItemId(i as u32)).collect();
                out.insert(items, support);
            }
        }
    }
    Ok(out)
}

fn candidate_count(m: usize, depth: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for k in 1..=depth {
        c = c.saturating_mul((m - k + 1) as u128) / k as u128;
        total = total.saturating_add(c);
    }
    total
}
