//! Joining metrics, reputation and covariate tables on the user id.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use socdiv::graph::NodeId;

use crate::error::{CliError, Result};
use crate::io::{check_join, Table};
use crate::metrics::METRICS_KIND;
use crate::reputation::{read_popularity, reputation_rows, REPUTATION_KIND};

pub const COVARIATES_KIND: &str = "covariates";

/// Where the reputation index comes from.
#[derive(Debug, Clone)]
pub enum ReputationSource {
    /// Output of `socdiv reputation`.
    Table(PathBuf),
    /// Raw popularity counts; the index is computed on load.
    Popularity(PathBuf),
}

impl ReputationSource {
    pub fn from_flags(reputation: Option<&Path>, popularity: Option<&Path>) -> Result<Self> {
        match (reputation, popularity) {
            (Some(r), None) => Ok(ReputationSource::Table(r.to_path_buf())),
            (None, Some(p)) => Ok(ReputationSource::Popularity(p.to_path_buf())),
            (Some(_), Some(_)) => Err(CliError::input("give only one of --reputation and --popularity")),
            (None, None) => Err(CliError::input("one of --reputation or --popularity is required")),
        }
    }

    fn load(&self) -> Result<Table> {
        match self {
            ReputationSource::Table(p) => Table::read(p, REPUTATION_KIND, &["user", "reputation_index"]),
            ReputationSource::Popularity(p) => {
                let rows = reputation_rows(&read_popularity(p)?)?;
                let headers = ["user", "upvotes_log", "thanks_log", "favorites_log", "reputation_index", "ensemble_measure"];
                Ok(Table {
                    path: p.clone(),
                    headers: headers.iter().map(|s| s.to_string()).collect(),
                    lines: (0..rows.len() as u64).map(|i| i + 3).collect(),
                    rows: rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.user.to_string(),
                                r.upvotes_log.to_string(),
                                r.thanks_log.to_string(),
                                r.favorites_log.to_string(),
                                r.reputation_index.to_string(),
                                r.ensemble_measure.to_string(),
                            ]
                        })
                        .collect(),
                })
            }
        }
    }
}

struct Source {
    name: &'static str,
    table: Table,
    index: BTreeMap<NodeId, usize>,
}

/// Tables whose id sets are identical, with columns looked up by name.
pub struct Dataset {
    pub ids: Vec<NodeId>,
    sources: Vec<Source>,
}

impl Dataset {
    /// Loads and joins the tables; any id present in one table but not another is an error.
    pub fn load(metrics: &Path, reputation: &ReputationSource, covariates: Option<&Path>) -> Result<Self> {
        let mut tables = vec![
            ("metrics", Table::read(metrics, METRICS_KIND, &["ego"])?, "ego"),
            ("reputation", reputation.load()?, "user"),
        ];
        if let Some(c) = covariates {
            tables.push(("covariates", Table::read(c, COVARIATES_KIND, &["user"])?, "user"));
        }
        let mut sources = Vec::new();
        for (name, table, key) in tables {
            let index = table.index_by(key)?;
            sources.push(Source { name, table, index });
        }
        let sets: Vec<(&str, BTreeSet<NodeId>)> =
            sources.iter().map(|s| (s.name, s.index.keys().copied().collect())).collect();
        let ids = check_join(&sets)?.into_iter().collect();
        Ok(Dataset { ids, sources })
    }

    /// Column names across all tables, excluding the join keys.
    pub fn columns(&self, source: &str) -> Vec<String> {
        self.sources
            .iter()
            .filter(|s| s.name == source)
            .flat_map(|s| s.table.headers.iter().filter(|h| *h != "user" && *h != "ego").cloned())
            .collect()
    }

    /// Numeric column in `ids` order; empty cells are `None`. The first table
    /// that has the column wins, in the order metrics, reputation, covariates.
    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let s = self
            .sources
            .iter()
            .find(|s| s.table.column(name).is_some())
            .ok_or_else(|| CliError::input(format!("unknown variable `{name}`")))?;
        let c = s.table.column(name).expect("found above");
        self.ids.iter().map(|id| s.table.number(s.index[id], c)).collect()
    }
}

/// Metric columns holding counts, which are log-transformed by default.
pub fn is_count_column(name: &str) -> bool {
    matches!(name, "indegree" | "weak" | "strong" | "bridged_kclip" | "answers") || name.starts_with("kclip_")
}

pub fn log10p1(x: f64) -> f64 {
    (x + 1.0).log10()
}
