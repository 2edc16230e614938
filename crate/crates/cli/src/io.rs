//! File formats shared by the subcommands.
//!
//! CSV files start with a schema comment `#socdiv:<kind>:v1` followed by a
//! header row. Readers accept files without the comment but reject a comment
//! naming another kind or version, and check that required columns exist.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use socdiv::graph::{read_edge_list, FollowGraph, NodeId};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: &str = "v1";

pub fn schema_line(kind: &str) -> String {
    format!("#socdiv:{kind}:{SCHEMA_VERSION}")
}

pub fn open_read(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

/// Buffered writer for `path`, or stdout when `path` is `None`.
pub fn open_write(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e)
}

pub fn read_graph(path: &Path) -> Result<FollowGraph> {
    let edges = read_edge_list(open_read(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    FollowGraph::from_edge_list(edges).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// One node id per line; `#` comments and blank lines are ignored.
pub fn read_ids(path: &Path) -> Result<Vec<NodeId>> {
    let mut ids = Vec::new();
    for (i, line) in open_read(path)?.lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let id = t
            .parse::<NodeId>()
            .map_err(|e| CliError::input(format!("{}: line {}: invalid node id {t:?}: {e}", path.display(), i + 1)))?;
        ids.push(id);
    }
    Ok(ids)
}

/// A CSV file loaded as strings, keyed by column name.
#[derive(Debug, Clone)]
pub struct Table {
    pub path: PathBuf,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// 1-based file line of each row.
    pub lines: Vec<u64>,
}

impl Table {
    pub fn read(path: &Path, kind: &str, required: &[&str]) -> Result<Table> {
        let mut reader = open_read(path)?;
        let mut first = String::new();
        reader.read_line(&mut first).map_err(|e| CliError::io(path, e))?;
        if let Some(rest) = first.trim().strip_prefix("#socdiv:") {
            let expected = format!("{kind}:{SCHEMA_VERSION}");
            if rest != expected {
                return Err(CliError::input(format!(
                    "{}: schema `{rest}` does not match expected `{expected}`",
                    path.display()
                )));
            }
        }
        let reader = open_read(path)?;
        let mut csv = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let headers: Vec<String> = csv
            .headers()
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
            .iter()
            .map(str::to_string)
            .collect();
        for col in required {
            if !headers.iter().any(|h| h == col) {
                return Err(CliError::input(format!("{}: missing column `{col}`", path.display())));
            }
        }
        let mut rows = Vec::new();
        let mut lines = Vec::new();
        for rec in csv.records() {
            let rec = rec.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            lines.push(rec.position().map_or(0, |p| p.line()));
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Table {
            path: path.to_path_buf(),
            headers,
            rows,
            lines,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn row_error(&self, row: usize, msg: impl std::fmt::Display) -> CliError {
        CliError::input(format!("{}: line {}: {msg}", self.path.display(), self.lines[row]))
    }

    /// Row index per id in column `key`; duplicate ids are an error.
    pub fn index_by(&self, key: &str) -> Result<BTreeMap<NodeId, usize>> {
        let c = self
            .column(key)
            .ok_or_else(|| CliError::input(format!("{}: missing column `{key}`", self.path.display())))?;
        let mut out = BTreeMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            let id: NodeId = row[c]
                .parse()
                .map_err(|e| self.row_error(r, format!("invalid {key} {:?}: {e}", row[c])))?;
            if out.insert(id, r).is_some() {
                return Err(self.row_error(r, format!("duplicate {key} {id}")));
            }
        }
        Ok(out)
    }

    /// Numeric value at `(row, col)`; `None` for an empty cell.
    pub fn number(&self, row: usize, col: usize) -> Result<Option<f64>> {
        let s = &self.rows[row][col];
        if s.is_empty() {
            return Ok(None);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| self.row_error(row, format!("column `{}`: not a number: {s:?}", self.headers[col])))?;
        if !v.is_finite() {
            return Err(self.row_error(row, format!("column `{}`: not finite: {s:?}", self.headers[col])));
        }
        Ok(Some(v))
    }
}

/// Fails unless every key set is identical, naming the ids that do not join.
pub fn check_join(sets: &[(&str, BTreeSet<NodeId>)]) -> Result<BTreeSet<NodeId>> {
    let all: BTreeSet<NodeId> = sets.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    let mut problems = Vec::new();
    for (name, set) in sets {
        let missing: Vec<NodeId> = all.difference(set).copied().collect();
        if !missing.is_empty() {
            let shown: Vec<String> = missing.iter().take(20).map(NodeId::to_string).collect();
            let more = if missing.len() > 20 { format!(" (+{} more)", missing.len() - 20) } else { String::new() };
            problems.push(format!("{} ids missing from {name}: {}{more}", missing.len(), shown.join(", ")));
        }
    }
    if problems.is_empty() {
        Ok(all)
    } else {
        Err(CliError::input(format!("join mismatch: {}", problems.join("; "))))
    }
}

/// 64-bit FNV-1a, used to derive seeds from configuration text.
pub fn fnv1a(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
