//! The iterative sieve.
//!
//! Mining runs as a system of enclosed level loops driven by an explicit
//! cursor stack — no procedure recursion. Level 1 is the root database
//! restricted to frequent items; every deeper level is a conditional
//! database built for the current reference element. References are visited
//! in `rate` order (ascending frequency), a reference's child database
//! contains only elements at later rate positions, and a pattern is emitted
//! for every reference visited, so level `i` produces the patterns of
//! length `i`. The stream is deterministic: depth-first, rate-ascending at
//! every level.

use std::time::Instant;

use crate::config::MiningConfig;
use crate::db::{ItemId, Tid, VerticalDatabase};
use crate::filters::independence_check;
use crate::level::{LevelContext, ListEncoding, ScratchBuffers};
use crate::pattern::{GroupBlock, Pattern, PatternSink};
use crate::Result;

/// Counters and observability for one mining run.
#[derive(Clone, Debug, Default)]
pub struct MiningStats {
    pub transactions: u32,
    pub items: usize,
    /// Emitted patterns by length; index 0 counts length-1 patterns.
    pub pattern_counts: Vec<u64>,
    /// Patterns dropped by the independence filter, by length.
    pub filtered_counts: Vec<u64>,
    /// Total same-frequency group members attached to patterns.
    pub group_members_attached: u64,
    /// Seconds spent constructing each level's databases; index 0 is the
    /// root build.
    pub level_build_seconds: Vec<f64>,
    /// Peak bytes allocated to conditional tid-list storage (levels >= 2).
    pub peak_conditional_bytes: usize,
    /// Bytes of root-level tid-list storage.
    pub root_storage_bytes: usize,
    pub elapsed_seconds: f64,
}

impl MiningStats {
    fn new(db: &VerticalDatabase) -> Self {
        MiningStats {
            transactions: db.transaction_count(),
            items: db.item_count(),
            ..Default::default()
        }
    }

    pub fn total_patterns(&self) -> u64 {
        self.pattern_counts.iter().sum()
    }

    pub fn total_filtered(&self) -> u64 {
        self.filtered_counts.iter().sum()
    }

    /// Folds a partition's counters into this one. Peak bytes add up, which
    /// upper-bounds simultaneous usage of independent partitions.
    fn merge(&mut self, other: &MiningStats) {
        merge_counts(&mut self.pattern_counts, &other.pattern_counts);
        merge_counts(&mut self.filtered_counts, &other.filtered_counts);
        self.group_members_attached += other.group_members_attached;
        let n = self.level_build_seconds.len().max(other.level_build_seconds.len());
        self.level_build_seconds.resize(n, 0.0);
        for (i, &s) in other.level_build_seconds.iter().enumerate() {
            self.level_build_seconds[i] += s;
        }
        self.peak_conditional_bytes += other.peak_conditional_bytes;
    }
}

fn merge_counts(into: &mut Vec<u64>, from: &[u64]) {
    if into.len() < from.len() {
        into.resize(from.len(), 0);
    }
    for (i, &c) in from.iter().enumerate() {
        into[i] += c;
    }
}

fn bump(counts: &mut Vec<u64>, index: usize) {
    if counts.len() <= index {
        counts.resize(index + 1, 0);
    }
    counts[index] += 1;
}

fn add_seconds(times: &mut Vec<f64>, index: usize, seconds: f64) {
    if times.len() <= index {
        times.resize(index + 1, 0.0);
    }
    times[index] += seconds;
}

/// Builds the level-1 context: all items with root frequency at or above
/// the threshold, in item-id order, with lists stored per the configured
/// encoding.
pub fn root_context(db: &VerticalDatabase, cfg: &MiningConfig) -> LevelContext {
    let mut ctx = LevelContext::empty(cfg.encoding());
    ctx.reset(cfg.encoding(), db.transaction_count());
    for i in 0..db.item_count() {
        let item = ItemId(i as u32);
        let list = db.tid_list(item);
        if (list.len() as u32) < cfg.min_support {
            continue;
        }
        let start = ctx.storage_len_units();
        let mut prev: Tid = 0;
        for &tid in list {
            ctx.append_encoded(tid, prev);
            prev = tid;
        }
        ctx.commit_element(item, list.len() as u32, start);
    }
    ctx.finish();
    ctx
}

/// Loads the reference element's transaction template into the scratch
/// buffers: marks every transaction in its list and assigns the replacement
/// numbering 1, 2, … in ascending order. Returns the smallest and largest
/// marked id. The caller must clear the template afterwards.
pub fn load_reference_template(
    scratch: &mut ScratchBuffers,
    parent: &LevelContext,
    ref_rate_pos: usize,
) -> (Tid, Tid) {
    let j = parent.rate()[ref_rate_pos] as usize;
    let mut next: Tid = 0;
    let mut lo: Tid = 0;
    let mut hi: Tid = 0;
    parent.for_each_tid(j, |tid| {
        next += 1;
        if next == 1 {
            lo = tid;
        }
        hi = tid;
        scratch.mark(tid, next);
        true
    });
    (lo, hi)
}

/// Zeroes exactly the template entries set by [`load_reference_template`].
pub fn clear_reference_template(
    scratch: &mut ScratchBuffers,
    parent: &LevelContext,
    ref_rate_pos: usize,
) {
    let j = parent.rate()[ref_rate_pos] as usize;
    parent.for_each_tid(j, |tid| {
        scratch.unmark(tid);
        true
    });
}

/// Builds the conditional database for the reference at `ref_rate_pos` of
/// `parent`. Candidates are the elements at later rate positions; each list
/// is intersected against the reference template, renumbered, and kept only
/// when the intersection reaches the threshold. The scratch template is
/// clean again on return.
pub fn build_conditional(
    parent: &LevelContext,
    ref_rate_pos: usize,
    cfg: &MiningConfig,
    scratch: &mut ScratchBuffers,
) -> LevelContext {
    let mut child = LevelContext::empty(cfg.encoding());
    build_conditional_into(
        parent,
        ref_rate_pos,
        cfg.min_support,
        cfg.encoding(),
        None,
        None,
        scratch,
        &mut child,
    );
    child
}

#[allow(clippy::too_many_arguments)]
fn build_conditional_into(
    parent: &LevelContext,
    ref_rate_pos: usize,
    min_support: u32,
    encoding: ListEncoding,
    skip: Option<&[bool]>,
    variable_of: Option<(&[u32], u32)>,
    scratch: &mut ScratchBuffers,
    child: &mut LevelContext,
) {
    assert!(
        scratch.capacity() >= parent.txn_count() as usize,
        "scratch sized for {} transactions, parent has {}",
        scratch.capacity(),
        parent.txn_count()
    );
    let j_sup = parent.rate()[ref_rate_pos] as usize;
    let ref_name = parent.names()[j_sup];
    let ref_freq = parent.freqs()[j_sup];

    child.reset(encoding, ref_freq);
    child.set_prefix(parent.prefix(), ref_name);

    let (ref_min, ref_max) = load_reference_template(scratch, parent, ref_rate_pos);
    let ref_var = variable_of.map(|(codes, stride)| codes[ref_name.index()] / stride);

    for it in (ref_rate_pos + 1)..parent.element_count() {
        let jt = parent.rate()[it] as usize;
        if skip.is_some_and(|s| s[jt]) {
            continue;
        }
        let name = parent.names()[jt];
        if let (Some((codes, stride)), Some(rv)) = (variable_of, ref_var) {
            // Same-variable items are mutually exclusive; their lists
            // cannot intersect.
            if codes[name.index()] / stride == rv {
                continue;
            }
        }
        let start = child.storage_len_units();
        let mut freq: u32 = 0;
        let mut prev: Tid = 0;
        parent.for_each_tid(jt, |tid| {
            if tid < ref_min {
                return true;
            }
            if tid > ref_max {
                return false;
            }
            if scratch.is_marked(tid) {
                let renumbered = scratch.new_id(tid);
                child.append_encoded(renumbered, prev);
                prev = renumbered;
                freq += 1;
            }
            true
        });
        if freq >= min_support {
            child.commit_element(name, freq, start);
        } else {
            // Below threshold: rewind the fill position, dropping the element.
            child.truncate_storage(start);
        }
    }
    child.finish();
    clear_reference_template(scratch, parent, ref_rate_pos);
}

struct Driver<'a, S: PatternSink> {
    db: &'a VerticalDatabase,
    cfg: &'a MiningConfig,
    sink: &'a mut S,
    variable_of: Option<(&'a [u32], u32)>,
    scratch: ScratchBuffers,
    levels: Vec<LevelContext>,
    /// Per level, elements ruled out by the independence filter. A
    /// suppressed element is neither visited as a reference nor admitted to
    /// any child of its level, so no deeper pattern contains the dropped
    /// combination.
    suppressed: Vec<Vec<bool>>,
    path: Vec<ItemId>,
    group_stack: Vec<GroupBlock>,
    emit_buf: Pattern,
    stats: MiningStats,
}

impl<'a, S: PatternSink> Driver<'a, S> {
    fn new(db: &'a VerticalDatabase, cfg: &'a MiningConfig, sink: &'a mut S) -> Self {
        let variable_of = if cfg.exclusive_skip {
            db.coding().map(|c| (c.codes.as_slice(), c.stride))
        } else {
            None
        };
        Driver {
            db,
            cfg,
            sink,
            variable_of,
            scratch: ScratchBuffers::new(db.transaction_count()),
            levels: Vec::new(),
            suppressed: Vec::new(),
            path: Vec::new(),
            group_stack: Vec::new(),
            emit_buf: Pattern::new(Vec::new(), 0),
            stats: MiningStats::new(db),
        }
    }

    fn ensure_level(&mut self, depth: usize) {
        while self.levels.len() <= depth {
            self.levels.push(LevelContext::empty(self.cfg.encoding()));
        }
        while self.suppressed.len() <= depth {
            self.suppressed.push(Vec::new());
        }
    }

    /// Recomputes the filter mask after the context at `depth` is (re)built.
    /// Level-1 patterns have no prefix, so the root mask stays clear.
    fn refresh_suppression(&mut self, depth: usize) {
        let ctx = &self.levels[depth];
        let n_elems = ctx.element_count();
        let mask = &mut self.suppressed[depth];
        mask.clear();
        if depth == 0 || !self.cfg.filter_enabled {
            mask.resize(n_elems, false);
            return;
        }
        let n = self.db.transaction_count();
        let f_prefix = ctx.txn_count();
        for j in 0..n_elems {
            let f_last = self.db.frequency(ctx.names()[j]);
            let decision =
                independence_check(ctx.freqs()[j], f_prefix, f_last, n, self.cfg.sigma_multiplier);
            mask.push(!decision.keep);
        }
    }

    fn track_peak(&mut self) {
        let current: usize = self.levels.iter().skip(1).map(LevelContext::capacity_bytes).sum();
        if current > self.stats.peak_conditional_bytes {
            self.stats.peak_conditional_bytes = current;
        }
    }

    fn run(mut self, root: LevelContext, root_positions: &[usize]) -> MiningStats {
        self.ensure_level(0);
        self.levels[0] = root;
        self.refresh_suppression(0);

        let mut frames: Vec<usize> = vec![0];
        while !frames.is_empty() {
            let depth = frames.len() - 1;
            let pos_count = if depth == 0 {
                root_positions.len()
            } else {
                self.levels[depth].element_count()
            };
            if frames[depth] >= pos_count {
                frames.pop();
                if depth > 0 {
                    self.path.pop();
                    self.group_stack.pop();
                }
                continue;
            }
            let cursor = frames[depth];
            frames[depth] += 1;
            let rate_pos = if depth == 0 { root_positions[cursor] } else { cursor };

            let ctx = &self.levels[depth];
            let local = ctx.rate()[rate_pos] as usize;
            if self.suppressed[depth][local] {
                bump(&mut self.stats.filtered_counts, depth);
                continue;
            }
            let name = ctx.names()[local];
            let support = ctx.freqs()[local];

            let mut descend = false;
            let mut new_group: Option<Vec<ItemId>> = None;
            if ((depth + 1) as u32) < self.cfg.max_len {
                self.ensure_level(depth + 1);
                let t0 = Instant::now();
                {
                    let (lower, upper) = self.levels.split_at_mut(depth + 1);
                    build_conditional_into(
                        &lower[depth],
                        rate_pos,
                        self.cfg.min_support,
                        self.cfg.encoding(),
                        Some(&self.suppressed[depth]),
                        self.variable_of,
                        &mut self.scratch,
                        &mut upper[0],
                    );
                }
                add_seconds(
                    &mut self.stats.level_build_seconds,
                    depth + 1,
                    t0.elapsed().as_secs_f64(),
                );
                if self.cfg.grouping_enabled {
                    let members = self.levels[depth + 1].extract_elements_with_freq(support);
                    if !members.is_empty() {
                        self.stats.group_members_attached += members.len() as u64;
                        new_group = Some(members);
                    }
                }
                self.refresh_suppression(depth + 1);
                self.track_peak();
                descend = self.levels[depth + 1].element_count() > 0;
            }

            // Emission happens after the child build so a same-frequency
            // group discovered there attaches to this pattern.
            self.emit_buf.items.clear();
            self.emit_buf.items.extend_from_slice(&self.path);
            self.emit_buf.items.push(name);
            self.emit_buf.support = support;
            self.emit_buf.group.clear();
            for block in &self.group_stack {
                if !block.members.is_empty() {
                    self.emit_buf.group.push(block.clone());
                }
            }
            if let Some(members) = &new_group {
                self.emit_buf.group.push(GroupBlock { anchor: depth, members: members.clone() });
            }
            self.sink.emit(&self.emit_buf);
            bump(&mut self.stats.pattern_counts, depth);

            if descend {
                frames.push(0);
                self.path.push(name);
                self.group_stack
                    .push(GroupBlock { anchor: depth, members: new_group.unwrap_or_default() });
            }
        }
        self.stats
    }
}

/// Mines `db` under `cfg`, streaming every frequent pattern of length
/// `1..=max_len` into `sink`. The emission order is deterministic:
/// depth-first, ascending frequency at every level.
pub fn mine(db: &VerticalDatabase, cfg: &MiningConfig, sink: &mut impl PatternSink) -> Result<MiningStats> {
    cfg.validate()?;
    let started = Instant::now();
    let t0 = Instant::now();
    let root = root_context(db, cfg);
    let root_seconds = t0.elapsed().as_secs_f64();
    let root_bytes = root.storage_bytes();
    let positions: Vec<usize> = (0..root.element_count()).collect();

    let driver = Driver::new(db, cfg, sink);
    let mut stats = driver.run(root, &positions);
    add_seconds(&mut stats.level_build_seconds, 0, root_seconds);
    stats.root_storage_bytes = root_bytes;
    stats.elapsed_seconds = started.elapsed().as_secs_f64();
    Ok(stats)
}

/// Convenience wrapper collecting the stream in memory.
pub fn mine_collect(db: &VerticalDatabase, cfg: &MiningConfig) -> Result<(Vec<Pattern>, MiningStats)> {
    let mut patterns = Vec::new();
    let stats = mine(db, cfg, &mut patterns)?;
    Ok((patterns, stats))
}

/// Mines with the level-1 references partitioned across `threads` workers.
/// Workers share the immutable root context and own private scratch and
/// level arenas; the merged output is the union of the partitions, with
/// ordering across partitions unspecified.
pub fn mine_parallel(
    db: &VerticalDatabase,
    cfg: &MiningConfig,
    threads: usize,
) -> Result<(Vec<Pattern>, MiningStats)> {
    cfg.validate()?;
    let threads = threads.max(1);
    if threads == 1 {
        return mine_collect(db, cfg);
    }
    let started = Instant::now();
    let t0 = Instant::now();
    let root = root_context(db, cfg);
    let root_seconds = t0.elapsed().as_secs_f64();
    let root_bytes = root.storage_bytes();

    // Strided assignment: visit order correlates with subtree size, so
    // interleaving balances the partitions better than contiguous chunks.
    let assignments: Vec<Vec<usize>> = (0..threads)
        .map(|w| (w..root.element_count()).step_by(threads).collect())
        .collect();

    let mut patterns = Vec::new();
    let mut stats = MiningStats::new(db);
    std::thread::scope(|scope| {
        let root = &root;
        let handles: Vec<_> = assignments
            .iter()
            .filter(|positions| !positions.is_empty())
            .map(|positions| {
                scope.spawn(move || {
                    let mut local: Vec<Pattern> = Vec::new();
                    let driver = Driver::new(db, cfg, &mut local);
                    let stats = driver.run(root.clone(), positions);
                    (local, stats)
                })
            })
            .collect();
        for handle in handles {
            let (local, local_stats) = handle.join().expect("mining worker panicked");
            patterns.extend(local);
            stats.merge(&local_stats);
        }
    });
    add_seconds(&mut stats.level_build_seconds, 0, root_seconds);
    stats.root_storage_bytes = root_bytes;
    stats.elapsed_seconds = started.elapsed().as_secs_f64();
    Ok((patterns, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_frequent, DEFAULT_ORACLE_BUDGET};
    use crate::testutil::{random_db, table1_db};
    use std::collections::HashMap;

    fn cfg(min_support: u32, max_len: u32) -> MiningConfig {
        MiningConfig { min_support, max_len, ..Default::default() }
    }

    /// Counts transactions containing all of `items`, scanning the
    /// transaction-major view; independent of the tid-list intersection path.
    fn recount_support(db: &VerticalDatabase, items: &[ItemId]) -> u32 {
        db.horizontal().iter().filter(|txn| items.iter().all(|i| txn.contains(i))).count() as u32
    }

    fn as_itemset_map(patterns: &[Pattern]) -> HashMap<Vec<ItemId>, u32> {
        let mut map = HashMap::new();
        for p in patterns {
            let mut key = p.items.clone();
            key.sort_unstable();
            let dup = map.insert(key, p.support);
            assert!(dup.is_none(), "itemset emitted twice");
        }
        map
    }

    /// The published visit order for the root key arrays; breaks frequency
    /// ties the opposite way from [`compute_rate`], which the source of the
    /// numbers declares equally valid.
    fn published_root_rate() -> Vec<u32> {
        [8u32, 13, 2, 9, 5, 12, 4, 3, 11, 10, 6, 14, 1, 7].iter().map(|&j| j - 1).collect()
    }

    fn root_from_published_tables(rate: Vec<u32>) -> LevelContext {
        let db = table1_db();
        let mut storage = Vec::new();
        let mut names = Vec::new();
        let mut freqs = Vec::new();
        let mut addrs = Vec::new();
        for i in 0..14u32 {
            addrs.push(storage.len());
            storage.extend_from_slice(db.tid_list(ItemId(i)));
            names.push(ItemId(i));
            freqs.push(db.frequency(ItemId(i)));
        }
        LevelContext::from_parts(
            ListEncoding::Plain,
            storage,
            names,
            freqs,
            addrs,
            rate,
            20,
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn root_context_matches_published_key_arrays() {
        let db = table1_db();
        let ctx = root_context(&db, &cfg(5, 2));
        assert_eq!(ctx.element_count(), 14);
        assert_eq!(ctx.txn_count(), 20);
        assert_eq!(ctx.freqs(), &[13, 7, 10, 10, 8, 12, 15, 5, 8, 12, 11, 9, 7, 13]);
        let addrs_one_based: Vec<usize> = ctx.addrs().iter().map(|a| a + 1).collect();
        assert_eq!(addrs_one_based, vec![1, 14, 21, 31, 41, 49, 61, 76, 81, 89, 101, 112, 121, 128]);
        // Same frequency profile as the published order; ties stay stable.
        let rate_one_based: Vec<u32> = ctx.rate().iter().map(|&j| j + 1).collect();
        assert_eq!(rate_one_based, vec![8, 2, 13, 5, 9, 12, 3, 4, 11, 6, 10, 1, 14, 7]);
        for i in 0..14u32 {
            assert_eq!(ctx.decoded_list(i as usize), db.tid_list(ItemId(i)));
        }
        ctx.validate().unwrap();
    }

    #[test]
    fn conditional_build_matches_worked_example() {
        // Under the published visit order, the reference at position 6 is
        // x12; its conditional database is pinned element by element.
        let root = root_from_published_tables(published_root_rate());
        let mut scratch = ScratchBuffers::new(20);
        let child = build_conditional(&root, 5, &cfg(5, 9), &mut scratch);
        assert!(scratch.is_clean());

        assert_eq!(child.txn_count(), 9);
        assert_eq!(child.prefix(), &[ItemId(11)]);
        // x3, x10, x14, x1, x7 survive; x4 (4), x11 (0), x6 (4) fall short.
        assert_eq!(child.names(), &[ItemId(2), ItemId(9), ItemId(13), ItemId(0), ItemId(6)]);
        assert_eq!(child.freqs(), &[5, 7, 7, 6, 5]);
        let addrs_one_based: Vec<usize> = child.addrs().iter().map(|a| a + 1).collect();
        assert_eq!(addrs_one_based, vec![1, 6, 13, 20, 26]);
        let rate_one_based: Vec<u32> = child.rate().iter().map(|&j| j + 1).collect();
        assert_eq!(rate_one_based, vec![1, 5, 4, 2, 3]);
        // Renumbered lists.
        assert_eq!(child.decoded_list(0), vec![2, 4, 5, 8, 9]);
        assert_eq!(child.decoded_list(1), vec![1, 3, 4, 5, 6, 8, 9]);
        assert_eq!(child.decoded_list(2), vec![2, 3, 4, 5, 7, 8, 9]);
        assert_eq!(child.decoded_list(3), vec![2, 4, 5, 6, 8, 9]);
        assert_eq!(child.decoded_list(4), vec![2, 3, 5, 8, 9]);
        child.validate().unwrap();
    }

    #[test]
    fn conditional_gap_storage_matches_worked_rows() {
        let root = root_from_published_tables(published_root_rate());
        let mut scratch = ScratchBuffers::new(20);
        let delta_cfg = MiningConfig { delta_encoding: true, ..cfg(5, 9) };
        let child = build_conditional(&root, 5, &delta_cfg, &mut scratch);
        let expected: Vec<Tid> = [
            &[2u32, 2, 1, 3, 1][..],
            &[1, 2, 1, 1, 1, 2, 1],
            &[2, 1, 1, 1, 2, 1, 1],
            &[2, 2, 1, 1, 2, 1],
            &[2, 1, 2, 3, 1],
        ]
        .concat();
        assert_eq!(child.storage_words().unwrap(), expected.as_slice());
        // Every gap is below 128, so the varint form is the same values in
        // single bytes.
        let varint_cfg = MiningConfig { varint_storage: true, ..cfg(5, 9) };
        let child = build_conditional(&root, 5, &varint_cfg, &mut scratch);
        let bytes: Vec<u8> = expected.iter().map(|&v| v as u8).collect();
        assert_eq!(child.storage_bytes_raw().unwrap(), bytes.as_slice());
        assert_eq!(child.decoded_list(0), vec![2, 4, 5, 8, 9]);
    }

    #[test]
    fn scratch_template_matches_worked_rows() {
        let db = table1_db();
        let ctx = root_context(&db, &cfg(5, 2));
        // x12 sits at visit position 6 under the stable order too.
        assert_eq!(ctx.names()[ctx.rate()[5] as usize], ItemId(11));
        let mut scratch = ScratchBuffers::new(20);
        let (lo, hi) = load_reference_template(&mut scratch, &ctx, 5);
        assert_eq!((lo, hi), (1, 20));
        assert_eq!(
            scratch.marks_row(20),
            vec![1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1]
        );
        assert_eq!(
            scratch.renumber_row(20),
            vec![1, 0, 2, 0, 0, 3, 0, 0, 0, 4, 0, 0, 5, 0, 6, 7, 0, 0, 8, 9]
        );
        clear_reference_template(&mut scratch, &ctx, 5);
        assert!(scratch.is_clean());
    }

    #[test]
    fn disjoint_reference_yields_empty_child() {
        use crate::db::build_vertical;
        // Item 0 only in transaction 1; item 1 only in transactions 2, 3.
        let db = build_vertical(2, &[
            vec![ItemId(0)],
            vec![ItemId(1)],
            vec![ItemId(1)],
        ]);
        let ctx = root_context(&db, &cfg(1, 5));
        let mut scratch = ScratchBuffers::new(3);
        let child = build_conditional(&ctx, 0, &cfg(1, 5), &mut scratch);
        assert_eq!(child.element_count(), 0);
        assert_eq!(child.txn_count(), 1);
        assert!(scratch.is_clean());
    }

    #[test]
    fn mine_reference_db_emits_published_pairs() {
        let db = table1_db();
        let (patterns, stats) = mine_collect(&db, &cfg(5, 2)).unwrap();
        let x12 = ItemId(11);
        let at = patterns
            .iter()
            .position(|p| p.items == vec![x12])
            .expect("singleton for x12 emitted");
        assert_eq!(patterns[at].support, 9);
        let expected_pairs = [
            (ItemId(2), 5),
            (ItemId(6), 5),
            (ItemId(0), 6),
            (ItemId(9), 7),
            (ItemId(13), 7),
        ];
        for (offset, (item, support)) in expected_pairs.iter().enumerate() {
            let p = &patterns[at + 1 + offset];
            assert_eq!(p.items, vec![x12, *item]);
            assert_eq!(p.support, *support);
        }
        assert_eq!(stats.pattern_counts[0], 14);
        assert_eq!(stats.total_patterns(), patterns.len() as u64);
    }

    #[test]
    fn depth_one_emits_root_items_in_visit_order(){
        let db = table1_db();
        let (patterns, stats) = mine_collect(&db, &cfg(5, 1)).unwrap();
        let ctx = root_context(&db, &cfg(5, 1));
        assert_eq!(patterns.len(), 14);
        for (i, &pos) in ctx.rate().iter().enumerate() {
            assert_eq!(patterns[i].items, vec![ctx.names()[pos as usize]]);
            assert_eq!(patterns[i].support, ctx.freqs()[pos as usize]);
        }
        // No conditional databases are built at depth 1.
        assert_eq!(stats.peak_conditional_bytes, 0);
    }

    #[test]
    fn threshold_above_transaction_count_yields_nothing() {
        let db = table1_db();
        let (patterns, stats) = mine_collect(&db, &cfg(21, 3)).unwrap();
        assert!(patterns.is_empty());
        assert_eq!(stats.total_patterns(), 0);
    }

    #[test]
    fn miner_matches_oracle_on_random_db() {
        let db = random_db(12, 30, 0.4, 23);
        let (patterns, _) = mine_collect(&db, &cfg(3, 4)).unwrap();
        let mined = as_itemset_map(&patterns);
        let expected = enumerate_frequent(&db, 3, 4, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(mined.len(), expected.len());
        assert_eq!(mined, expected);
    }

    #[test]
    fn emitted_supports_survive_recount() {
        let db = random_db(10, 50, 0.5, 99);
        let (patterns, _) = mine_collect(&db, &cfg(4, 5)).unwrap();
        assert!(!patterns.is_empty());
        for p in &patterns {
            assert_eq!(p.support, recount_support(&db, &p.items), "pattern {:?}", p.items);
            assert!(p.items.len() <= 5);
            assert!(p.support >= 4);
        }
    }

    #[test]
    fn emitted_stream_is_prefix_closed() {
        // Every pattern's chain prefix was emitted just before it, deeper in
        // the stream ordering; check set-wise.
        let db = random_db(9, 40, 0.5, 5);
        let (patterns, _) = mine_collect(&db, &cfg(3, 4)).unwrap();
        let chains: std::collections::HashSet<Vec<ItemId>> =
            patterns.iter().map(|p| p.items.clone()).collect();
        for p in &patterns {
            if p.items.len() > 1 {
                let prefix = p.items[..p.items.len() - 1].to_vec();
                assert!(chains.contains(&prefix));
            }
        }
    }

    #[test]
    fn encoding_modes_produce_identical_streams() {
        let db = random_db(11, 60, 0.45, 8);
        let base = cfg(3, 4);
        let (plain, _) = mine_collect(&db, &base).unwrap();
        let delta_cfg = MiningConfig { delta_encoding: true, ..base.clone() };
        let (delta, _) = mine_collect(&db, &delta_cfg).unwrap();
        let varint_cfg = MiningConfig { varint_storage: true, ..base };
        let (varint, _) = mine_collect(&db, &varint_cfg).unwrap();
        assert_eq!(plain, delta);
        assert_eq!(plain, varint);
    }

    #[test]
    fn runs_are_deterministic() {
        let db = random_db(10, 45, 0.5, 13);
        let (a, sa) = mine_collect(&db, &cfg(2, 4)).unwrap();
        let (b, sb) = mine_collect(&db, &cfg(2, 4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa.pattern_counts, sb.pattern_counts);
    }

    #[test]
    fn parallel_partitions_merge_to_sequential_set() {
        let db = random_db(12, 60, 0.5, 31);
        let (seq, seq_stats) = mine_collect(&db, &cfg(3, 4)).unwrap();
        let (par, par_stats) = mine_parallel(&db, &cfg(3, 4), 3).unwrap();
        assert_eq!(as_itemset_map(&seq), as_itemset_map(&par));
        assert_eq!(seq_stats.total_patterns(), par_stats.total_patterns());
        assert_eq!(seq_stats.pattern_counts, par_stats.pattern_counts);
    }

    #[test]
    fn filter_drops_reducible_pairs_and_prunes_their_subtrees() {
        let db = random_db(6, 2000, 0.5, 42);
        let base = cfg(50, 3);
        let (unfiltered, _) = mine_collect(&db, &base).unwrap();
        let filter_cfg = MiningConfig { filter_enabled: true, ..base };
        let (filtered, stats) = mine_collect(&db, &filter_cfg).unwrap();

        // Independent data: most pairs drop.
        assert!(stats.total_filtered() > 0);
        assert!(filtered.len() < unfiltered.len());
        // Every surviving pattern is a genuine pattern at the same support.
        let full_set = as_itemset_map(&unfiltered);
        for p in &filtered {
            let mut key = p.items.clone();
            key.sort_unstable();
            assert_eq!(full_set.get(&key), Some(&p.support));
        }
        // At level 2 every pair is either emitted or counted as dropped.
        let pairs_total = unfiltered.iter().filter(|p| p.items.len() == 2).count() as u64;
        let emitted = stats.pattern_counts.get(1).copied().unwrap_or(0);
        let dropped = stats.filtered_counts.get(1).copied().unwrap_or(0);
        assert_eq!(emitted + dropped, pairs_total);
    }

    #[test]
    fn filter_keeps_planted_dependency() {
        let db = random_db(6, 2000, 0.5, 7);
        let db = crate::generator::plant_dependency(&db, ItemId(2), ItemId(4), 0.9, 8).unwrap();
        let filter_cfg = MiningConfig { filter_enabled: true, ..cfg(50, 2) };
        let (patterns, _) = mine_collect(&db, &filter_cfg).unwrap();
        let found = patterns.iter().any(|p| {
            let mut key = p.items.clone();
            key.sort_unstable();
            key == vec![ItemId(2), ItemId(4)]
        });
        assert!(found, "planted pair must survive the filter");
    }

    fn grouped_block_db() -> VerticalDatabase {
        use crate::db::build_vertical;
        let (a, b, c, d, e, f) = (ItemId(0), ItemId(1), ItemId(2), ItemId(3), ItemId(4), ItemId(5));
        build_vertical(6, &[
            vec![a, b, c, d, f],
            vec![a, b, c, d, e],
            vec![a, b, c],
            vec![a, b, c, e],
            vec![a, b, c],
            vec![d, e],
            vec![d],
            vec![e],
            vec![e, f],
            vec![f],
        ])
    }

    #[test]
    fn grouping_attaches_saturated_block() {
        let db = grouped_block_db();
        let group_cfg = MiningConfig { grouping_enabled: true, ..cfg(2, u32::MAX) };
        let (patterns, stats) = mine_collect(&db, &group_cfg).unwrap();
        assert!(stats.group_members_attached > 0);
        let anchor = patterns
            .iter()
            .find(|p| p.items == vec![ItemId(0)])
            .expect("reference pattern for the block host");
        assert_eq!(anchor.support, 5);
        let members: Vec<ItemId> = anchor.group_items().collect();
        assert_eq!(members, vec![ItemId(1), ItemId(2)]);
        // Sub-patterns omitting group members are not emitted separately.
        assert!(!patterns.iter().any(|p| p.items == vec![ItemId(0), ItemId(1)]));
        // Deeper patterns under the host inherit the group.
        let deeper = patterns
            .iter()
            .find(|p| p.items == vec![ItemId(0), ItemId(4)])
            .expect("deeper pattern under the host");
        let inherited: Vec<ItemId> = deeper.group_items().collect();
        assert_eq!(inherited, vec![ItemId(1), ItemId(2)]);
    }

    #[test]
    fn grouping_expansion_reproduces_ungrouped_set() {
        for seed in [3u64, 17] {
            let mut db = grouped_block_db();
            if seed != 3 {
                db = random_db(7, 40, 0.5, seed);
                // Plant an always-co-occurring block: items 1 and 2 copy item 0.
                let host = db.tid_list(ItemId(0)).to_vec();
                let mut lists: Vec<Vec<Tid>> =
                    (0..7).map(|i| db.tid_list(ItemId(i)).to_vec()).collect();
                lists[1] = host.clone();
                lists[2] = host;
                db = VerticalDatabase::from_parts(
                    db.names().to_vec(),
                    lists,
                    db.transaction_count(),
                    None,
                )
                .unwrap();
            }
            let base = cfg(2, u32::MAX);
            let (plain, _) = mine_collect(&db, &base).unwrap();
            let group_cfg = MiningConfig { grouping_enabled: true, ..base };
            let (grouped, _) = mine_collect(&db, &group_cfg).unwrap();

            let mut expanded: HashMap<Vec<ItemId>, u32> = HashMap::new();
            for p in &grouped {
                for (items, support) in p.implied_itemsets() {
                    let prev = expanded.insert(items, support);
                    assert!(prev.is_none(), "expansion produced a duplicate");
                }
            }
            assert_eq!(expanded, as_itemset_map(&plain), "seed {seed}");

            // Group membership is literal: recounts agree.
            for p in grouped.iter().filter(|p| !p.group.is_empty()) {
                for member in p.group_items() {
                    let mut with = p.items.clone();
                    with.push(member);
                    assert_eq!(recount_support(&db, &with), p.support);
                }
            }
        }
    }

    #[test]
    fn exclusive_skip_preserves_record_results() {
        use crate::io::{parse_record, RecordSchema};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(606);
        let arities = vec![3u32, 2, 4, 3];
        let schema = RecordSchema::new(arities.clone(), 100).unwrap();
        let mut text = String::new();
        for _ in 0..200 {
            let fields: Vec<String> =
                arities.iter().map(|&a| rng.gen_range(1..=a).to_string()).collect();
            text.push_str(&fields.join(" "));
            text.push('\n');
        }
        let db = parse_record(std::io::Cursor::new(text), &schema).unwrap();
        let base = cfg(5, 3);
        let (plain, _) = mine_collect(&db, &base).unwrap();
        let skip_cfg = MiningConfig { exclusive_skip: true, ..base };
        let (skipped, _) = mine_collect(&db, &skip_cfg).unwrap();
        assert_eq!(plain, skipped);
    }

    #[test]
    fn sampled_supports_hold_on_generated_workload() {
        let db = random_db(50, 10_000, 0.5, 1203);
        let (patterns, _) = mine_collect(&db, &cfg(20, 3)).unwrap();
        assert!(patterns.len() > 1000);
        let horizontal = db.horizontal();
        for p in patterns.iter().step_by(100) {
            let support = horizontal
                .iter()
                .filter(|txn| p.items.iter().all(|i| txn.binary_search(i).is_ok()))
                .count() as u32;
            assert_eq!(p.support, support);
        }
    }
}
