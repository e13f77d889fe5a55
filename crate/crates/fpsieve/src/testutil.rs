//! Shared fixtures for the unit tests.

use crate::db::{build_vertical, ItemId, VerticalDatabase};

/// Transaction-major form of the 14-item, 20-transaction reference database
/// used across the golden tests (items given by 1-based number).
pub(crate) fn table1_transactions() -> Vec<Vec<ItemId>> {
    let rows: [&[u32]; 20] = [
        &[2, 4, 6, 8, 10, 12, 13],
        &[2, 4, 5, 8, 10, 11, 13],
        &[1, 3, 6, 7, 9, 12, 14],
        &[1, 4, 6, 7, 9, 11, 13],
        &[1, 3, 6, 7, 9, 11, 13],
        &[2, 4, 5, 7, 10, 12, 14],
        &[1, 4, 6, 7, 10, 11, 14],
        &[2, 4, 5, 7, 9, 11, 14],
        &[1, 3, 6, 7, 10, 11, 14],
        &[1, 3, 5, 8, 10, 12, 14],
        &[2, 4, 6, 7, 9, 11, 13],
        &[1, 3, 5, 7, 9, 11, 13],
        &[1, 3, 5, 7, 10, 12, 14],
        &[1, 3, 6, 7, 10, 11, 14],
        &[1, 4, 6, 8, 10, 12, 13],
        &[2, 4, 5, 8, 9, 12, 14],
        &[2, 4, 6, 7, 9, 11, 14],
        &[1, 3, 6, 7, 10, 11, 14],
        &[1, 3, 6, 7, 10, 12, 14],
        &[1, 3, 5, 7, 10, 12, 14],
    ];
    rows.iter().map(|r| r.iter().map(|&x| ItemId(x - 1)).collect()).collect()
}

pub(crate) fn table1_db() -> VerticalDatabase {
    build_vertical(14, &table1_transactions())
}

/// Seeded random database for oracle-equivalence style tests.
pub(crate) fn random_db(items: usize, transactions: usize, prob: f64, seed: u64) -> VerticalDatabase {
    crate::generator::generate_bernoulli(items, transactions as u32, prob, seed)
        .expect("valid generator parameters")
}
