//! Synthetic transaction databases for benchmarks and statistical tests.
//!
//! All generation flows from a seeded ChaCha8 stream, so a given parameter
//! set reproduces the same database on every run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::db::{ItemId, Tid, VerticalDatabase};
use crate::{Error, Result};

/// Generates `transaction_count` transactions over `item_count` items, each
/// item independently present with probability `prob`. Draws happen
/// transaction-major (items in id order within a transaction).
pub fn generate_bernoulli(
    item_count: usize,
    transaction_count: u32,
    prob: f64,
    seed: u64,
) -> Result<VerticalDatabase> {
    check_prob(prob)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tid_lists: Vec<Vec<Tid>> = vec![Vec::new(); item_count];
    for tid in 1..=transaction_count {
        for list in tid_lists.iter_mut() {
            if rng.gen_bool(prob) {
                list.push(tid);
            }
        }
    }
    let names = (1..=item_count).map(|i| format!("x{i}")).collect();
    VerticalDatabase::from_parts(names, tid_lists, transaction_count, None)
}

/// Rewrites `target`'s membership so the pair (`source`, `target`) is
/// deliberately dependent: present with probability `copy_prob` in
/// transactions containing `source`, and with probability
/// `(1 - copy_prob) · base_rate` elsewhere, where `base_rate` is the
/// target's original marginal rate.
pub fn plant_dependency(
    db: &VerticalDatabase,
    source: ItemId,
    target: ItemId,
    copy_prob: f64,
    seed: u64,
) -> Result<VerticalDatabase> {
    check_prob(copy_prob)?;
    if source == target {
        return Err(Error::Config("plant source and target must differ".into()));
    }
    if source.index() >= db.item_count() || target.index() >= db.item_count() {
        return Err(Error::Config("plant item out of range".into()));
    }
    let n = db.transaction_count();
    let base_rate = if n == 0 { 0.0 } else { f64::from(db.frequency(target)) / f64::from(n) };
    let elsewhere = (1.0 - copy_prob) * base_rate;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source_list = db.tid_list(source);
    let mut next_source = 0usize;
    let mut new_target: Vec<Tid> = Vec::new();
    for tid in 1..=n {
        let in_source = next_source < source_list.len() && source_list[next_source] == tid;
        if in_source {
            next_source += 1;
        }
        let p = if in_source { copy_prob } else { elsewhere };
        if rng.gen_bool(p) {
            new_target.push(tid);
        }
    }

    let mut lists: Vec<Vec<Tid>> =
        (0..db.item_count()).map(|i| db.tid_list(ItemId(i as u32)).to_vec()).collect();
    lists[target.index()] = new_target;
    VerticalDatabase::from_parts(db.names().to_vec(), lists, n, db.coding().cloned())
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}
