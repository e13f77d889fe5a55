//! Emitted patterns and the sink abstraction consumers plug into.

use crate::db::ItemId;

/// Items attached to one position of a pattern by the same-frequency
/// optimization: every transaction counted for the pattern also contains
/// each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupBlock {
    /// Index into [`Pattern::items`] of the element whose conditional
    /// database the members saturated.
    pub anchor: usize,
    pub members: Vec<ItemId>,
}

/// A frequent pattern: the chain of reference items that produced it, its
/// support in the root database, and any attached same-frequency groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    /// Prefix order; the last element is the deepest reference.
    pub items: Vec<ItemId>,
    pub support: u32,
    pub group: Vec<GroupBlock>,
}

impl Pattern {
    pub fn new(items: Vec<ItemId>, support: u32) -> Self {
        Pattern { items, support, group: Vec::new() }
    }

    /// All group members across blocks.
    pub fn group_items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.group.iter().flat_map(|b| b.members.iter().copied())
    }

    /// Total length including group members.
    pub fn full_len(&self) -> usize {
        self.items.len() + self.group.iter().map(|b| b.members.len()).sum::<usize>()
    }

    /// Expands the pattern into the itemsets it stands for: the items plus
    /// every subset of the group members, all at the same support. Itemsets
    /// come back sorted by item id. Exponential in the group size; meant
    /// for deriving the shorter patterns a grouped run does not emit.
    pub fn implied_itemsets(&self) -> Vec<(Vec<ItemId>, u32)> {
        let members: Vec<ItemId> = self.group_items().collect();
        let mut out = Vec::with_capacity(1 << members.len());
        for mask in 0u64..(1u64 << members.len()) {
            let mut items = self.items.clone();
            for (b, &m) in members.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    items.push(m);
                }
            }
            items.sort_unstable();
            out.push((items, self.support));
        }
        out
    }
}

/// Consumer of the pattern stream. The miner reuses one pattern buffer, so
/// implementations must copy whatever they keep.
pub trait PatternSink {
    fn emit(&mut self, pattern: &Pattern);
}

impl PatternSink for Vec<Pattern> {
    fn emit(&mut self, pattern: &Pattern) {
        self.push(pattern.clone());
    }
}

/// Discards patterns; useful for timing runs and counting via statistics.
#[derive(Default)]
pub struct NullSink;

impl PatternSink for NullSink {
    fn emit(&mut self, _pattern: &Pattern) {}
}
