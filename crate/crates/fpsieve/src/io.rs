//! Line-oriented input and output formats.
//!
//! Basket format: one transaction per line, whitespace-separated item
//! tokens, blank lines ignored, duplicate tokens within a line collapsed.
//!
//! Record format: one record per line, one integer field per schema
//! variable; field `i` holding value `k` becomes the item coded
//! `stride·i + k` (variables and values 1-based). Every record therefore
//! contains exactly one item per variable.
//!
//! Pattern output: one pattern per line — support, a tab, then the item
//! names separated by single spaces, with same-frequency group members
//! parenthesized after the item that anchored them, e.g.
//! `6<TAB>x9 (x34 x21 x64) x5`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::db::{ItemId, RecordCoding, Tid, VerticalDatabase};
use crate::miner::MiningStats;
use crate::pattern::{Pattern, PatternSink};
use crate::{Error, Result};

/// Shape of a record-type database: one arity per variable plus the name
/// coding stride.
#[derive(Clone, Debug)]
pub struct RecordSchema {
    arities: Vec<u32>,
    stride: u32,
}

pub const DEFAULT_STRIDE: u32 = 100;

impl RecordSchema {
    /// Validates that every arity fits under the stride, which keeps the
    /// coding injective.
    pub fn new(arities: Vec<u32>, stride: u32) -> Result<Self> {
        if stride < 2 {
            return Err(Error::Schema(format!("stride {stride} must be >= 2")));
        }
        if arities.is_empty() {
            return Err(Error::Schema("schema needs at least one variable".into()));
        }
        for (i, &a) in arities.iter().enumerate() {
            if a == 0 {
                return Err(Error::Schema(format!("variable {} has zero values", i + 1)));
            }
            if a >= stride {
                return Err(Error::Schema(format!(
                    "variable {} arity {a} not below stride {stride}",
                    i + 1
                )));
            }
        }
        Ok(RecordSchema { arities, stride })
    }

    pub fn variable_count(&self) -> usize {
        self.arities.len()
    }

    pub fn stride(&self) -> u32 {
        self.stride
    }

    /// Item code for variable `var` (1-based) taking value `value` (1-based).
    pub fn code(&self, var: u32, value: u32) -> u32 {
        self.stride * var + value
    }

    /// Loads a schema from `key=value` lines: `stride=100` (optional) and
    /// `arities=3 4 2`. `#` starts a comment line.
    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut stride = DEFAULT_STRIDE;
        let mut arities: Option<Vec<u32>> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, "expected key=value"))?;
            match key.trim() {
                "stride" => {
                    stride = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(lineno, "stride is not an integer"))?;
                }
                "arities" => {
                    let parsed: std::result::Result<Vec<u32>, _> =
                        value.split_whitespace().map(str::parse).collect();
                    arities = Some(
                        parsed.map_err(|_| Error::parse(lineno, "arities must be integers"))?,
                    );
                }
                other => return Err(Error::parse(lineno, format!("unknown key '{other}'"))),
            }
        }
        let arities = arities.ok_or_else(|| Error::Schema("schema missing arities".into()))?;
        RecordSchema::new(arities, stride)
    }
}

/// Parses basket-format text. Item ids are assigned in first-occurrence
/// order; the original tokens become the name table.
pub fn parse_basket(reader: impl BufRead) -> Result<VerticalDatabase> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, ItemId> = HashMap::new();
    let mut tid_lists: Vec<Vec<Tid>> = Vec::new();
    let mut tid: Tid = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        let mut first_token = true;
        for token in line.split_whitespace() {
            if first_token {
                // Count the transaction only once the line proves non-blank.
                tid += 1;
                first_token = false;
            }
            let item = *index.entry(token.to_string()).or_insert_with(|| {
                names.push(token.to_string());
                tid_lists.push(Vec::new());
                ItemId((names.len() - 1) as u32)
            });
            let list = &mut tid_lists[item.index()];
            if list.last() != Some(&tid) {
                list.push(tid);
            }
        }
    }
    VerticalDatabase::from_parts(names, tid_lists, tid, None)
}

/// Parses record-format text under `schema`. Each field is coded to an
/// integer item name; the resulting transactions are plain basket
/// transactions with exactly one item per variable.
pub fn parse_record(reader: impl BufRead, schema: &RecordSchema) -> Result<VerticalDatabase> {
    let m = schema.variable_count();
    let mut names: Vec<String> = Vec::new();
    let mut codes: Vec<u32> = Vec::new();
    let mut index: HashMap<u32, ItemId> = HashMap::new();
    let mut tid_lists: Vec<Vec<Tid>> = Vec::new();
    let mut tid: Tid = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != m {
            return Err(Error::parse(
                lineno,
                format!("expected {m} fields, found {}", fields.len()),
            ));
        }
        tid += 1;
        for (var0, field) in fields.iter().enumerate() {
            let value: u32 = field
                .parse()
                .map_err(|_| Error::parse(lineno, format!("field '{field}' is not an integer")))?;
            let arity = schema.arities[var0];
            if value == 0 || value > arity {
                return Err(Error::parse(
                    lineno,
                    format!("variable {} value {value} outside 1..={arity}", var0 + 1),
                ));
            }
            let code = schema.code((var0 + 1) as u32, value);
            let item = *index.entry(code).or_insert_with(|| {
                names.push(code.to_string());
                codes.push(code);
                tid_lists.push(Vec::new());
                ItemId((names.len() - 1) as u32)
            });
            tid_lists[item.index()].push(tid);
        }
    }
    let coding = RecordCoding { stride: schema.stride, codes };
    VerticalDatabase::from_parts(names, tid_lists, tid, Some(coding))
}

/// Writes the database in basket format, items within a transaction in
/// ascending id order. Transactions with no items come out as blank lines,
/// which a re-parse skips.
pub fn write_basket(db: &VerticalDatabase, mut writer: impl Write) -> Result<()> {
    for txn in db.horizontal() {
        let mut first = true;
        for item in txn {
            if !first {
                writer.write_all(b" ")?;
            }
            writer.write_all(db.name(item).as_bytes())?;
            first = false;
        }
        writer.write_all(b"\n")?;
    }
    Ok(())
}

fn write_pattern_line(pattern: &Pattern, names: &[String], out: &mut impl Write) -> std::io::Result<()> {
    write!(out, "{}\t", pattern.support)?;
    for (idx, item) in pattern.items.iter().enumerate() {
        if idx > 0 {
            out.write_all(b" ")?;
        }
        out.write_all(names[item.index()].as_bytes())?;
        for block in pattern.group.iter().filter(|b| b.anchor == idx) {
            out.write_all(b" (")?;
            for (gi, member) in block.members.iter().enumerate() {
                if gi > 0 {
                    out.write_all(b" ")?;
                }
                out.write_all(names[member.index()].as_bytes())?;
            }
            out.write_all(b")")?;
        }
    }
    out.write_all(b"\n")
}

/// Writes one line per pattern in the given order.
pub fn write_patterns<'a>(
    patterns: impl IntoIterator<Item = &'a Pattern>,
    names: &[String],
    mut writer: impl Write,
) -> Result<()> {
    for pattern in patterns {
        write_pattern_line(pattern, names, &mut writer)?;
    }
    Ok(())
}

/// Pattern sink that streams each emission straight to a writer. The first
/// write failure is kept and returned by [`WriterSink::finish`].
pub struct WriterSink<'a, W: Write> {
    writer: W,
    names: &'a [String],
    error: Option<std::io::Error>,
}

impl<'a, W: Write> WriterSink<'a, W> {
    pub fn new(writer: W, names: &'a [String]) -> Self {
        WriterSink { writer, names, error: None }
    }

    pub fn finish(mut self) -> Result<()> {
        if let Some(e) = self.error.take() {
            return Err(e.into());
        }
        self.writer.flush()?;
        Ok(())
    }
}

impl<W: Write> PatternSink for WriterSink<'_, W> {
    fn emit(&mut self, pattern: &Pattern) {
        if self.error.is_some() {
            return;
        }
        if let Err(e) = write_pattern_line(pattern, self.names, &mut self.writer) {
            self.error = Some(e);
        }
    }
}

/// Writes the run statistics as `key=value` lines, one per key, in a fixed
/// order.
pub fn write_stats(stats: &MiningStats, mut out: impl Write) -> Result<()> {
    writeln!(out, "transactions={}", stats.transactions)?;
    writeln!(out, "items={}", stats.items)?;
    writeln!(out, "patterns_total={}", stats.total_patterns())?;
    for (i, count) in stats.pattern_counts.iter().enumerate() {
        writeln!(out, "patterns_len_{}={}", i + 1, count)?;
    }
    writeln!(out, "filtered_total={}", stats.total_filtered())?;
    for (i, count) in stats.filtered_counts.iter().enumerate() {
        if *count > 0 {
            writeln!(out, "filtered_len_{}={}", i + 1, count)?;
        }
    }
    writeln!(out, "group_members={}", stats.group_members_attached)?;
    for (i, secs) in stats.level_build_seconds.iter().enumerate() {
        writeln!(out, "level_build_seconds_{}={:.6}", i + 1, secs)?;
    }
    writeln!(out, "root_storage_bytes={}", stats.root_storage_bytes)?;
    writeln!(out, "peak_conditional_bytes={}", stats.peak_conditional_bytes)?;
    writeln!(out, "elapsed_seconds={:.6}", stats.elapsed_seconds)?;
    Ok(())
}
