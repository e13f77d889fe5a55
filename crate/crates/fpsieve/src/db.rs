//! Vertical database: one ascending transaction-id list per item.

use crate::{Error, Result};

/// Transaction id. Ids are 1-based throughout the crate.
pub type Tid = u32;

/// Dense item identifier in `[0, item_count)`.
///
/// External name tokens map to dense ids at ingestion; the database keeps
/// the name table for output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Integer name coding for record-type databases: item `k` of variable `i`
/// (both 1-based) carries the code `stride·i + k`, so items of the same
/// variable share the quotient `code / stride`.
#[derive(Clone, Debug)]
pub struct RecordCoding {
    pub stride: u32,
    /// Code per item, indexed by [`ItemId`].
    pub codes: Vec<u32>,
}

impl RecordCoding {
    /// Decodes a code back to its (variable, value) pair, both 1-based.
    pub fn decode(&self, code: u32) -> (u32, u32) {
        (code / self.stride, code % self.stride)
    }
}

/// A transaction database stored item-major: for every item, the strictly
/// increasing list of ids of the transactions that contain it.
#[derive(Clone, Debug, Default)]
pub struct VerticalDatabase {
    names: Vec<String>,
    tid_lists: Vec<Vec<Tid>>,
    transaction_count: u32,
    coding: Option<RecordCoding>,
}

impl VerticalDatabase {
    /// Assembles a database from parts, checking the tid-list invariants.
    pub fn from_parts(
        names: Vec<String>,
        tid_lists: Vec<Vec<Tid>>,
        transaction_count: u32,
        coding: Option<RecordCoding>,
    ) -> Result<Self> {
        if names.len() != tid_lists.len() {
            return Err(Error::Context("names/tid_lists length mismatch".into()));
        }
        if let Some(coding) = &coding {
            if coding.codes.len() != names.len() {
                return Err(Error::Context("codes length mismatch".into()));
            }
            if coding.stride < 2 {
                return Err(Error::Context("coding stride must be >= 2".into()));
            }
        }
        for (i, list) in tid_lists.iter().enumerate() {
            let mut prev = 0;
            for &tid in list {
                if tid <= prev {
                    return Err(Error::Context(format!("tid list {i} not strictly increasing")));
                }
                if tid > transaction_count {
                    return Err(Error::Context(format!(
                        "tid list {i} contains id {tid} > transaction count {transaction_count}"
                    )));
                }
                prev = tid;
            }
        }
        Ok(VerticalDatabase { names, tid_lists, transaction_count, coding })
    }

    pub fn item_count(&self) -> usize {
        self.names.len()
    }

    pub fn transaction_count(&self) -> u32 {
        self.transaction_count
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, item: ItemId) -> &str {
        &self.names[item.index()]
    }

    pub fn tid_list(&self, item: ItemId) -> &[Tid] {
        &self.tid_lists[item.index()]
    }

    /// Root frequency of an item (length of its tid list).
    pub fn frequency(&self, item: ItemId) -> u32 {
        self.tid_lists[item.index()].len() as u32
    }

    pub fn coding(&self) -> Option<&RecordCoding> {
        self.coding.as_ref()
    }

    /// Total number of stored tids across all lists.
    pub fn total_postings(&self) -> usize {
        self.tid_lists.iter().map(Vec::len).sum()
    }

    /// Looks an item up by its external name.
    pub fn item_by_name(&self, name: &str) -> Option<ItemId> {
        self.names.iter().position(|n| n == name).map(|i| ItemId(i as u32))
    }

    /// Reconstructs the transaction-major view: for each transaction, the
    /// items it contains in ascending id order.
    pub fn horizontal(&self) -> Vec<Vec<ItemId>> {
        let mut out = vec![Vec::new(); self.transaction_count as usize];
        for (i, list) in self.tid_lists.iter().enumerate() {
            for &tid in list {
                out[(tid - 1) as usize].push(ItemId(i as u32));
            }
        }
        out
    }
}

/// Builds the vertical layout from transaction-major input.
///
/// Transaction ids are assigned by input order, 1-based. Duplicate items
/// within a transaction collapse. Item names default to `x1..xM`; callers
/// with real name tables use [`VerticalDatabase::from_parts`].
pub fn build_vertical(item_count: usize, transactions: &[Vec<ItemId>]) -> VerticalDatabase {
    let mut tid_lists: Vec<Vec<Tid>> = vec![Vec::new(); item_count];
    for (t, txn) in transactions.iter().enumerate() {
        let tid = (t + 1) as Tid;
        for &item in txn {
            assert!(item.index() < item_count, "item id {} out of range", item.0);
            let list = &mut tid_lists[item.index()];
            if list.last() != Some(&tid) {
                list.push(tid);
            }
        }
    }
    let names = (1..=item_count).map(|i| format!("x{i}")).collect();
    VerticalDatabase {
        names,
        tid_lists,
        transaction_count: transactions.len() as u32,
        coding: None,
    }
}
