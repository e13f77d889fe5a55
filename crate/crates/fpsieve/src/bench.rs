//! Depth-sweep benchmarking: one mining run per maximum pattern length,
//! reporting wall time, pattern count and peak conditional storage.

use std::io::Write;
use std::time::{Duration, Instant};

use crate::config::MiningConfig;
use crate::db::VerticalDatabase;
use crate::miner::mine;
use crate::pattern::NullSink;
use crate::Result;

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub k: u32,
    pub seconds: f64,
    pub patterns: u64,
    pub peak_bytes: usize,
}

/// Runs the sweep `k_from..=k_to` over `db`. Short runs repeat until
/// `min_sample` of total time or `max_reps` repetitions accumulate and the
/// median is reported, which keeps the fast end of the sweep out of timer
/// noise. Pattern streams are discarded; counts come from the statistics.
pub fn run_sweep(
    db: &VerticalDatabase,
    base: &MiningConfig,
    k_from: u32,
    k_to: u32,
    min_sample: Duration,
    max_reps: u32,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for k in k_from..=k_to {
        let cfg = MiningConfig { max_len: k, ..base.clone() };
        cfg.validate()?;
        let mut samples: Vec<f64> = Vec::new();
        let mut patterns = 0;
        let mut peak_bytes = 0;
        let mut spent = Duration::ZERO;
        for _ in 0..max_reps.max(1) {
            let mut sink = NullSink;
            let t0 = Instant::now();
            let stats = mine(db, &cfg, &mut sink)?;
            let elapsed = t0.elapsed();
            samples.push(elapsed.as_secs_f64());
            patterns = stats.total_patterns();
            peak_bytes = stats.peak_conditional_bytes;
            spent += elapsed;
            if spent >= min_sample {
                break;
            }
        }
        samples.sort_by(f64::total_cmp);
        let seconds = samples[samples.len() / 2];
        rows.push(BenchRow { k, seconds, patterns, peak_bytes });
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "k,seconds,patterns,peak_bytes";

pub fn write_csv(rows: &[BenchRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{},{:.6},{},{}", row.k, row.seconds, row.patterns, row.peak_bytes)?;
    }
    Ok(())
}
