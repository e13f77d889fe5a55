use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fpsieve::bench::{run_sweep, write_csv};
use fpsieve::io::{
    parse_basket, parse_record, write_basket, write_patterns, write_stats, RecordSchema,
    WriterSink,
};
use fpsieve::{
    enumerate_frequent, generate_bernoulli, mine, mine_parallel, plant_dependency, Error, ItemId,
    MiningConfig, Pattern, VerticalDatabase, DEFAULT_ORACLE_BUDGET,
};

/// Frequent-pattern miner over flat conditional tid-list databases.
///
/// Exit codes: 0 success, 1 usage or runtime error, 2 input parse error.
#[derive(Parser)]
#[command(name = "fpsieve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent patterns from a database file.
    Mine(MineArgs),
    /// Generate a synthetic basket-format database.
    Generate(GenerateArgs),
    /// Sweep the maximum pattern length and report timings as CSV.
    Bench(BenchArgs),
    /// Brute-force reference miner (debugging aid).
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Basket,
    Record,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Args)]
struct MineArgs {
    /// Input database path.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Basket)]
    format: Format,
    /// Schema file (required for record format).
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Occurrence threshold; patterns below it are not reported.
    #[arg(long)]
    min_support: u32,
    /// Maximum pattern length; unlimited when omitted.
    #[arg(long)]
    max_len: Option<u32>,
    /// Statistical-independence filter for reducible patterns.
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    filter: Switch,
    /// Width of the independence acceptance band, in standard deviations.
    #[arg(long, default_value_t = 3.0)]
    sigma: f64,
    /// Same-frequency grouping optimization.
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    grouping: Switch,
    /// Store conditional lists as gaps instead of absolute ids.
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    delta: Switch,
    /// Pack gaps into minimal varint bytes (implies gap form).
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    varint: Switch,
    /// Skip same-variable intersections on record-coded input.
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    exclusive_skip: Switch,
    /// Worker threads partitioning the level-1 references. With more than
    /// one thread the output order across partitions is unspecified.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Pattern output path; '-' writes to stdout.
    #[arg(long, default_value = "-")]
    output: String,
    /// Re-sort the output by descending support before writing.
    #[arg(long)]
    sort_by_support: bool,
    /// Write a key=value statistics report to this path.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of items.
    #[arg(long)]
    items: usize,
    /// Number of transactions.
    #[arg(long)]
    transactions: u32,
    /// Independent per-item occurrence probability.
    #[arg(long)]
    prob: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Plant a dependency: SOURCE,TARGET,COPY_PROB with 1-based item numbers.
    #[arg(long)]
    plant: Option<String>,
    /// Output path; '-' writes to stdout.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    items: usize,
    #[arg(long)]
    transactions: u32,
    #[arg(long)]
    prob: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    min_support: u32,
    /// Depth sweep, inclusive: e.g. 2..8.
    #[arg(long)]
    k_sweep: String,
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    filter: Switch,
    #[arg(long, default_value_t = 3.0)]
    sigma: f64,
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    grouping: Switch,
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    delta: Switch,
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    varint: Switch,
    /// Repeat runs shorter than this until the total reaches it.
    #[arg(long, default_value_t = 200)]
    min_sample_ms: u64,
    #[arg(long, default_value_t = 5)]
    max_reps: u32,
    /// CSV output path; '-' writes to stdout.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Basket)]
    format: Format,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    min_support: u32,
    #[arg(long)]
    max_len: u32,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    budget: u128,
    #[arg(long, default_value = "-")]
    output: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Parse { .. } | Error::Schema(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Mine(args) => run_mine(args),
        Command::Generate(args) => run_generate(args),
        Command::Bench(args) => run_bench(args),
        Command::Oracle(args) => run_oracle(args),
    }
}

fn load_database(
    path: &Path,
    format: Format,
    schema: Option<&PathBuf>,
) -> Result<VerticalDatabase, Error> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        Format::Basket => parse_basket(reader),
        Format::Record => {
            let schema_path =
                schema.ok_or_else(|| Error::Config("record format needs --schema".into()))?;
            let schema = RecordSchema::load(BufReader::new(File::open(schema_path)?))?;
            parse_record(reader, &schema)
        }
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>, Error> {
    Ok(if path == "-" {
        Box::new(BufWriter::new(std::io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(File::create(path)?))
    })
}

fn run_mine(args: MineArgs) -> Result<(), Error> {
    let cfg = MiningConfig {
        min_support: args.min_support,
        max_len: args.max_len.unwrap_or(u32::MAX),
        filter_enabled: args.filter.on(),
        sigma_multiplier: args.sigma,
        grouping_enabled: args.grouping.on(),
        delta_encoding: args.delta.on(),
        varint_storage: args.varint.on(),
        exclusive_skip: args.exclusive_skip.on(),
    };
    cfg.validate()?;
    let db = load_database(&args.input, args.format, args.schema.as_ref())?;

    let stats = if args.threads > 1 || args.sort_by_support {
        let (mut patterns, stats) = mine_parallel(&db, &cfg, args.threads.max(1))?;
        if args.sort_by_support {
            patterns.sort_by(|a, b| b.support.cmp(&a.support));
        }
        let mut out = open_output(&args.output)?;
        write_patterns(patterns.iter(), db.names(), &mut out)?;
        out.flush()?;
        stats
    } else {
        let out = open_output(&args.output)?;
        let mut sink = WriterSink::new(out, db.names());
        let stats = mine(&db, &cfg, &mut sink)?;
        sink.finish()?;
        stats
    };

    if let Some(path) = args.stats {
        let mut out = BufWriter::new(File::create(path)?);
        write_stats(&stats, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn run_generate(args: GenerateArgs) -> Result<(), Error> {
    let mut db = generate_bernoulli(args.items, args.transactions, args.prob, args.seed)?;
    if let Some(spec) = &args.plant {
        let (source, target, copy_prob) = parse_plant(spec, args.items)?;
        // Distinct stream for the rewrite so the base draw stays reproducible.
        db = plant_dependency(&db, source, target, copy_prob, args.seed.wrapping_add(1))?;
    }
    let mut out = open_output(&args.output)?;
    write_basket(&db, &mut out)?;
    out.flush()?;
    Ok(())
}

fn parse_plant(spec: &str, items: usize) -> Result<(ItemId, ItemId, f64), Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    let usage = || Error::Config(format!("--plant expects SOURCE,TARGET,COPY_PROB, got '{spec}'"));
    if parts.len() != 3 {
        return Err(usage());
    }
    let source: usize = parts[0].trim().parse().map_err(|_| usage())?;
    let target: usize = parts[1].trim().parse().map_err(|_| usage())?;
    let copy_prob: f64 = parts[2].trim().parse().map_err(|_| usage())?;
    if source < 1 || source > items || target < 1 || target > items {
        return Err(Error::Config(format!("--plant items must be in 1..={items}")));
    }
    Ok((ItemId((source - 1) as u32), ItemId((target - 1) as u32), copy_prob))
}

fn parse_sweep(spec: &str) -> Result<(u32, u32), Error> {
    let usage = || Error::Config(format!("--k-sweep expects A..B, got '{spec}'"));
    let (a, b) = spec.split_once("..").ok_or_else(usage)?;
    let from: u32 = a.trim().parse().map_err(|_| usage())?;
    let to: u32 = b.trim().strip_prefix('=').unwrap_or(b.trim()).parse().map_err(|_| usage())?;
    if from < 1 || to < from {
        return Err(usage());
    }
    Ok((from, to))
}

fn run_bench(args: BenchArgs) -> Result<(), Error> {
    let (k_from, k_to) = parse_sweep(&args.k_sweep)?;
    let base = MiningConfig {
        min_support: args.min_support,
        filter_enabled: args.filter.on(),
        sigma_multiplier: args.sigma,
        grouping_enabled: args.grouping.on(),
        delta_encoding: args.delta.on(),
        varint_storage: args.varint.on(),
        ..Default::default()
    };
    base.validate()?;
    let db = generate_bernoulli(args.items, args.transactions, args.prob, args.seed)?;
    let rows = run_sweep(
        &db,
        &base,
        k_from,
        k_to,
        Duration::from_millis(args.min_sample_ms),
        args.max_reps,
    )?;
    let mut out = open_output(&args.output)?;
    write_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_oracle(args: OracleArgs) -> Result<(), Error> {
    let db = load_database(&args.input, args.format, args.schema.as_ref())?;
    let found = enumerate_frequent(&db, args.min_support, args.max_len, args.budget)?;
    let mut patterns: Vec<Pattern> =
        found.into_iter().map(|(items, support)| Pattern::new(items, support)).collect();
    patterns.sort_by(|a, b| (a.items.len(), &a.items).cmp(&(b.items.len(), &b.items)));
    let mut out = open_output(&args.output)?;
    write_patterns(patterns.iter(), db.names(), &mut out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_spec_parses() {
        assert_eq!(parse_sweep("2..8").unwrap(), (2, 8));
        assert_eq!(parse_sweep("1..=4").unwrap(), (1, 4));
        assert!(parse_sweep("0..4").is_err());
        assert!(parse_sweep("5..2").is_err());
        assert!(parse_sweep("2-8").is_err());
    }

    #[test]
    fn plant_spec_parses() {
        let (s, t, p) = parse_plant("3,7,0.9", 50).unwrap();
        assert_eq!((s, t), (ItemId(2), ItemId(6)));
        assert!((p - 0.9).abs() < 1e-12);
        assert!(parse_plant("3,7", 50).is_err());
        assert!(parse_plant("0,7,0.5", 50).is_err());
        assert!(parse_plant("3,51,0.5", 50).is_err());
    }
}
