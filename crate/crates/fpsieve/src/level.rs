//! One level of the sieve: a conditional database held as a flat integer
//! sequence plus its key arrays.
//!
//! All tid lists of a level live back-to-back in a single storage buffer.
//! Four parallel arrays index it: `names` (the item behind each local
//! element), `freqs` (support counts), `addrs` (start offset of each
//! element's list) and `rate` (the visit order, ascending frequency).
//! Lists are renumbered so ids fall in `[1, txn_count]`, where `txn_count`
//! is the frequency of the reference element the level was built for.

use crate::db::{ItemId, Tid};
use crate::encode::{push_varint, read_varint};
use crate::{Error, Result};

/// How tid lists are laid out in level storage.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ListEncoding {
    /// Absolute ids, one word each.
    #[default]
    Plain,
    /// First id verbatim, then gaps, one word each.
    Delta,
    /// First id verbatim, then gaps, packed as minimal-length varints.
    VarintDelta,
}

#[derive(Clone, Debug)]
pub(crate) enum ListStore {
    Words(Vec<Tid>),
    Bytes(Vec<u8>),
}

impl ListStore {
    fn len_units(&self) -> usize {
        match self {
            ListStore::Words(w) => w.len(),
            ListStore::Bytes(b) => b.len(),
        }
    }

    fn bytes(&self) -> usize {
        match self {
            ListStore::Words(w) => w.len() * std::mem::size_of::<Tid>(),
            ListStore::Bytes(b) => b.len(),
        }
    }

    fn capacity_bytes(&self) -> usize {
        match self {
            ListStore::Words(w) => w.capacity() * std::mem::size_of::<Tid>(),
            ListStore::Bytes(b) => b.capacity(),
        }
    }
}

/// A conditional database (or the root database at level 1).
#[derive(Clone, Debug)]
pub struct LevelContext {
    store: ListStore,
    encoding: ListEncoding,
    names: Vec<ItemId>,
    freqs: Vec<u32>,
    addrs: Vec<usize>,
    rate: Vec<u32>,
    txn_count: u32,
    prefix: Vec<ItemId>,
}

impl LevelContext {
    pub fn empty(encoding: ListEncoding) -> Self {
        let store = match encoding {
            ListEncoding::VarintDelta => ListStore::Bytes(Vec::new()),
            _ => ListStore::Words(Vec::new()),
        };
        LevelContext {
            store,
            encoding,
            names: Vec::new(),
            freqs: Vec::new(),
            addrs: Vec::new(),
            rate: Vec::new(),
            txn_count: 0,
            prefix: Vec::new(),
        }
    }

    /// Builds a context from explicit word storage and key arrays, checking
    /// every invariant. Intended for tests and tools that need to pin a
    /// specific element order or visit order.
    pub fn from_parts(
        encoding: ListEncoding,
        storage: Vec<Tid>,
        names: Vec<ItemId>,
        freqs: Vec<u32>,
        addrs: Vec<usize>,
        rate: Vec<u32>,
        txn_count: u32,
        prefix: Vec<ItemId>,
    ) -> Result<Self> {
        if encoding == ListEncoding::VarintDelta {
            return Err(Error::Context("from_parts takes word storage".into()));
        }
        let ctx = LevelContext {
            store: ListStore::Words(storage),
            encoding,
            names,
            freqs,
            addrs,
            rate,
            txn_count,
            prefix,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn element_count(&self) -> usize {
        self.names.len()
    }

    pub fn encoding(&self) -> ListEncoding {
        self.encoding
    }

    pub fn names(&self) -> &[ItemId] {
        &self.names
    }

    pub fn freqs(&self) -> &[u32] {
        &self.freqs
    }

    pub fn addrs(&self) -> &[usize] {
        &self.addrs
    }

    /// Visit order: local element indices sorted by ascending frequency,
    /// ties keeping local order.
    pub fn rate(&self) -> &[u32] {
        &self.rate
    }

    pub fn txn_count(&self) -> u32 {
        self.txn_count
    }

    /// Chain of reference items that conditioned this level (empty at root).
    pub fn prefix(&self) -> &[ItemId] {
        &self.prefix
    }

    /// Raw word storage, when the encoding is word based.
    pub fn storage_words(&self) -> Option<&[Tid]> {
        match &self.store {
            ListStore::Words(w) => Some(w),
            ListStore::Bytes(_) => None,
        }
    }

    /// Raw byte storage, when the encoding is varint based.
    pub fn storage_bytes_raw(&self) -> Option<&[u8]> {
        match &self.store {
            ListStore::Words(_) => None,
            ListStore::Bytes(b) => Some(b),
        }
    }

    /// Bytes of tid-list storage currently used.
    pub fn storage_bytes(&self) -> usize {
        self.store.bytes()
    }

    /// Bytes of tid-list storage currently allocated.
    pub fn capacity_bytes(&self) -> usize {
        self.store.capacity_bytes()
    }

    pub(crate) fn storage_len_units(&self) -> usize {
        self.store.len_units()
    }

    /// Decodes element `j`'s list to absolute ids.
    pub fn decoded_list(&self, j: usize) -> Vec<Tid> {
        let mut out = Vec::with_capacity(self.freqs[j] as usize);
        self.for_each_tid(j, |tid| {
            out.push(tid);
            true
        });
        out
    }

    /// Streams element `j`'s absolute ids in ascending order. The callback
    /// returns `false` to stop early.
    #[inline]
    pub fn for_each_tid<F: FnMut(Tid) -> bool>(&self, j: usize, mut f: F) {
        let count = self.freqs[j] as usize;
        let start = self.addrs[j];
        match (&self.store, self.encoding) {
            (ListStore::Words(w), ListEncoding::Plain) => {
                for &tid in &w[start..start + count] {
                    if !f(tid) {
                        return;
                    }
                }
            }
            (ListStore::Words(w), ListEncoding::Delta) => {
                let mut acc: Tid = 0;
                for &gap in &w[start..start + count] {
                    acc += gap;
                    if !f(acc) {
                        return;
                    }
                }
            }
            (ListStore::Bytes(b), _) => {
                let mut pos = start;
                let mut acc: Tid = 0;
                for _ in 0..count {
                    let gap = read_varint(b, &mut pos).expect("storage holds complete varints");
                    acc += gap;
                    if !f(acc) {
                        return;
                    }
                }
            }
            (ListStore::Words(_), ListEncoding::VarintDelta) => unreachable!(),
        }
    }

    /// Checks the structural invariants; used by [`Self::from_parts`] and
    /// the tests.
    pub fn validate(&self) -> Result<()> {
        let n = self.element_count();
        if self.freqs.len() != n || self.addrs.len() != n || self.rate.len() != n {
            return Err(Error::Context("key arrays differ in length".into()));
        }
        if let ListStore::Words(w) = &self.store {
            // Lists are contiguous: each element starts where the previous ended.
            let mut expected = 0usize;
            for j in 0..n {
                if self.addrs[j] != expected {
                    return Err(Error::Context(format!("element {j} start {} != {expected}", self.addrs[j])));
                }
                expected += self.freqs[j] as usize;
            }
            if w.len() != expected {
                return Err(Error::Context("storage length != sum of frequencies".into()));
            }
        }
        let mut seen = vec![false; n];
        for (i, &j) in self.rate.iter().enumerate() {
            let j = j as usize;
            if j >= n || seen[j] {
                return Err(Error::Context("rate is not a permutation".into()));
            }
            seen[j] = true;
            if i > 0 && self.freqs[self.rate[i - 1] as usize] > self.freqs[j] {
                return Err(Error::Context("rate is not ascending by frequency".into()));
            }
        }
        for j in 0..n {
            if self.freqs[j] == 0 {
                return Err(Error::Context(format!("element {j} has zero frequency")));
            }
            let mut prev: Tid = 0;
            let mut count = 0usize;
            let mut ok = true;
            self.for_each_tid(j, |tid| {
                ok &= tid > prev && tid <= self.txn_count;
                prev = tid;
                count += 1;
                true
            });
            if !ok || count != self.freqs[j] as usize {
                return Err(Error::Context(format!("element {j} list malformed")));
            }
        }
        Ok(())
    }

    // ---- construction hooks used by the miner ----

    /// Clears the context for reuse, keeping allocations.
    pub(crate) fn reset(&mut self, encoding: ListEncoding, txn_count: u32) {
        if encoding != self.encoding {
            *self = LevelContext::empty(encoding);
        }
        match &mut self.store {
            ListStore::Words(w) => w.clear(),
            ListStore::Bytes(b) => b.clear(),
        }
        self.names.clear();
        self.freqs.clear();
        self.addrs.clear();
        self.rate.clear();
        self.txn_count = txn_count;
        self.prefix.clear();
    }

    pub(crate) fn set_prefix(&mut self, parent_prefix: &[ItemId], reference: ItemId) {
        self.prefix.clear();
        self.prefix.extend_from_slice(parent_prefix);
        self.prefix.push(reference);
    }

    /// Appends one id to the list under construction. `prev` is the previous
    /// absolute id of the same list (0 at the start of a list).
    #[inline]
    pub(crate) fn append_encoded(&mut self, tid: Tid, prev: Tid) {
        match (&mut self.store, self.encoding) {
            (ListStore::Words(w), ListEncoding::Plain) => w.push(tid),
            (ListStore::Words(w), ListEncoding::Delta) => w.push(tid - prev),
            (ListStore::Bytes(b), _) => push_varint(b, tid - prev),
            (ListStore::Words(_), ListEncoding::VarintDelta) => unreachable!(),
        }
    }

    /// Drops a partially written list (the element stays out of the key
    /// arrays, so the fill position is unchanged).
    pub(crate) fn truncate_storage(&mut self, units: usize) {
        match &mut self.store {
            ListStore::Words(w) => w.truncate(units),
            ListStore::Bytes(b) => b.truncate(units),
        }
    }

    pub(crate) fn commit_element(&mut self, name: ItemId, freq: u32, start: usize) {
        self.names.push(name);
        self.freqs.push(freq);
        self.addrs.push(start);
    }

    pub(crate) fn finish(&mut self) {
        self.rate = compute_rate(&self.freqs);
    }

    /// Removes every element whose frequency equals `freq`, compacting the
    /// storage and key arrays and recomputing the visit order. Returns the
    /// removed items in local order.
    pub(crate) fn extract_elements_with_freq(&mut self, freq: u32) -> Vec<ItemId> {
        if !self.freqs.contains(&freq) {
            return Vec::new();
        }
        let n = self.element_count();
        let total_units = self.store.len_units();
        let mut removed = Vec::new();
        let mut write = 0usize;
        let mut kept = 0usize;
        for j in 0..n {
            let start = self.addrs[j];
            let end = if j + 1 < n { self.addrs[j + 1] } else { total_units };
            if self.freqs[j] == freq {
                removed.push(self.names[j]);
                continue;
            }
            if write != start {
                match &mut self.store {
                    ListStore::Words(w) => w.copy_within(start..end, write),
                    ListStore::Bytes(b) => b.copy_within(start..end, write),
                }
            }
            self.names[kept] = self.names[j];
            self.freqs[kept] = self.freqs[j];
            self.addrs[kept] = write;
            kept += 1;
            write += end - start;
        }
        self.names.truncate(kept);
        self.freqs.truncate(kept);
        self.addrs.truncate(kept);
        self.truncate_storage(write);
        self.finish();
        removed
    }
}

/// Computes the visit order for a frequency column: a permutation of local
/// indices such that frequencies are non-decreasing along it. Ties keep
/// ascending local order, which makes the order deterministic.
pub fn compute_rate(freqs: &[u32]) -> Vec<u32> {
    let mut rate: Vec<u32> = (0..freqs.len() as u32).collect();
    rate.sort_by_key(|&j| freqs[j as usize]);
    rate
}

/// Reusable scratch for conditional-database construction: a 0/1 membership
/// template over the reference element's transactions, and the replacement
/// numbering assigned to them. Both are indexed by 1-based transaction id
/// and shared by all levels of one mining task.
#[derive(Clone, Debug)]
pub struct ScratchBuffers {
    marks: Vec<u8>,
    renumber: Vec<Tid>,
}

impl ScratchBuffers {
    /// Allocates scratch for databases of up to `transaction_count` transactions.
    pub fn new(transaction_count: u32) -> Self {
        let len = transaction_count as usize + 1;
        ScratchBuffers { marks: vec![0; len], renumber: vec![0; len] }
    }

    #[inline]
    pub(crate) fn mark(&mut self, tid: Tid, new_id: Tid) {
        self.marks[tid as usize] = 1;
        self.renumber[tid as usize] = new_id;
    }

    #[inline]
    pub(crate) fn unmark(&mut self, tid: Tid) {
        self.marks[tid as usize] = 0;
        self.renumber[tid as usize] = 0;
    }

    #[inline]
    pub(crate) fn is_marked(&self, tid: Tid) -> bool {
        self.marks[tid as usize] == 1
    }

    #[inline]
    pub(crate) fn new_id(&self, tid: Tid) -> Tid {
        self.renumber[tid as usize]
    }

    pub fn capacity(&self) -> usize {
        self.marks.len() - 1
    }

    /// Membership template row for transactions `1..=n`.
    pub fn marks_row(&self, n: u32) -> Vec<u8> {
        self.marks[1..=n as usize].to_vec()
    }

    /// Replacement numbering row for transactions `1..=n` (0 = unmarked).
    pub fn renumber_row(&self, n: u32) -> Vec<Tid> {
        self.renumber[1..=n as usize].to_vec()
    }

    /// True when every entry is zeroed; constructors must leave it so.
    pub fn is_clean(&self) -> bool {
        self.marks.iter().all(|&m| m == 0) && self.renumber.iter().all(|&r| r == 0)
    }
}
