//! Popularity CSV ingestion and the reputation index table.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use socdiv::graph::NodeId;
use socdiv::reputation::{ensemble_popularity, log_transform, social_reputation_index, PopularityRecord};

use crate::error::{CliError, Result};
use crate::io::{open_write, schema_line, write_err, Table};
use crate::Format;

pub const POPULARITY_KIND: &str = "popularity";
pub const REPUTATION_KIND: &str = "reputation";
const COUNT_COLUMNS: [&str; 3] = ["upvotes", "thanks", "favorites"];

#[derive(Debug, Clone)]
pub struct ReputationArgs {
    pub popularity: PathBuf,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub fn read_popularity(path: &Path) -> Result<Vec<PopularityRecord>> {
    let mut required = vec!["user"];
    required.extend(COUNT_COLUMNS);
    let t = Table::read(path, POPULARITY_KIND, &required)?;
    t.index_by("user")?;
    let cols: Vec<usize> = required.iter().map(|c| t.column(c).expect("checked")).collect();
    let mut records = Vec::with_capacity(t.rows.len());
    for (r, row) in t.rows.iter().enumerate() {
        let user: NodeId = row[cols[0]].parse().map_err(|e| t.row_error(r, format!("invalid user: {e}")))?;
        let mut counts = [0u64; 3];
        for (j, name) in COUNT_COLUMNS.iter().enumerate() {
            let s = &row[cols[j + 1]];
            let v: i128 = s.parse().map_err(|_| t.row_error(r, format!("{name}: not an integer count: {s:?}")))?;
            if v < 0 {
                return Err(t.row_error(r, format!("{name}: negative count {v}")));
            }
            counts[j] = u64::try_from(v).map_err(|_| t.row_error(r, format!("{name}: count too large")))?;
        }
        records.push(PopularityRecord {
            user,
            upvotes: counts[0],
            thanks: counts[1],
            favorites: counts[2],
        });
    }
    Ok(records)
}

pub fn write_popularity<W: Write + ?Sized>(out: &mut W, records: &[PopularityRecord]) -> std::io::Result<()> {
    writeln!(out, "{}", schema_line(POPULARITY_KIND))?;
    writeln!(out, "user,upvotes,thanks,favorites")?;
    for r in records {
        writeln!(out, "{},{},{},{}", r.user, r.upvotes, r.thanks, r.favorites)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReputationRow {
    pub user: NodeId,
    pub upvotes_log: f64,
    pub thanks_log: f64,
    pub favorites_log: f64,
    pub reputation_index: f64,
    pub ensemble_measure: f64,
}

pub fn reputation_rows(records: &[PopularityRecord]) -> Result<Vec<ReputationRow>> {
    if records.is_empty() {
        return Ok(Vec::new());
    }
    let index = social_reputation_index(records).map_err(|e| CliError::input(e.to_string()))?;
    let ensemble = ensemble_popularity(records);
    Ok(records
        .iter()
        .zip(index.values)
        .zip(ensemble)
        .map(|((r, idx), ens)| ReputationRow {
            user: r.user,
            upvotes_log: log_transform(r.upvotes),
            thanks_log: log_transform(r.thanks),
            favorites_log: log_transform(r.favorites),
            reputation_index: idx,
            ensemble_measure: ens,
        })
        .collect())
}

/// `user -> reputation index` computed over every record.
pub fn reputation_by_user(records: &[PopularityRecord]) -> Result<BTreeMap<NodeId, ReputationRow>> {
    Ok(reputation_rows(records)?.into_iter().map(|r| (r.user, r)).collect())
}

pub fn write_reputation<W: Write>(out: &mut W, rows: &[ReputationRow], format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", schema_line(REPUTATION_KIND))?;
            writeln!(out, "user,upvotes_log,thanks_log,favorites_log,reputation_index,ensemble_measure")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.user, r.upvotes_log, r.thanks_log, r.favorites_log, r.reputation_index, r.ensemble_measure
                )?;
            }
        }
        Format::Jsonl => {
            for r in rows {
                let mut v = serde_json::to_value(r).expect("plain struct");
                v["user"] = serde_json::Value::String(r.user.to_string());
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(())
}

pub fn cmd_reputation(args: &ReputationArgs) -> Result<usize> {
    let records = read_popularity(&args.popularity)?;
    let rows = reputation_rows(&records)?;
    let out_path = args.out.as_deref();
    let mut out = open_write(out_path)?;
    write_reputation(&mut out, &rows, args.format).map_err(write_err(out_path))?;
    out.flush().map_err(write_err(out_path))?;
    Ok(rows.len())
}
