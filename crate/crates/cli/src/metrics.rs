//! Per-ego diversity metrics over a follow graph.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use socdiv::bridges::BridgeConfig;
use socdiv::diversity::{diversity_report, DiversityReport, ReportConfig};
use socdiv::graph::{FollowGraph, NodeId};
use socdiv::kclip::{ClipConfig, RemovalMode};

use crate::error::{CliError, Result};
use crate::io::{open_write, read_graph, read_ids, schema_line, write_err};
use crate::Format;

pub const METRICS_KIND: &str = "metrics";

#[derive(Debug, Clone)]
pub struct MetricsArgs {
    pub edges: PathBuf,
    pub egos: Option<PathBuf>,
    pub k: usize,
    pub k_sweep: Vec<usize>,
    pub mode: RemovalMode,
    pub adaptive_threshold: usize,
    pub jaccard_threshold: f64,
    pub max_followers: usize,
    pub format: Format,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

/// Why a row has no (or only partial) measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Skip {
    None,
    /// Bridged value omitted because the ego has too many followers.
    MaxFollowers,
    /// Ego id not present in the graph; no measurements.
    UnknownEgo,
}

impl Skip {
    pub fn as_str(self) -> &'static str {
        match self {
            Skip::None => "",
            Skip::MaxFollowers => "max_followers",
            Skip::UnknownEgo => "unknown_ego",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsRow {
    pub ego: NodeId,
    pub report: Option<DiversityReport>,
    pub skip: Skip,
}

/// Validated configuration for [`compute_metrics`].
#[derive(Debug, Clone)]
pub struct MetricsPlan {
    /// Sorted, deduplicated k values, one column each.
    pub ks: Vec<usize>,
    pub report: ReportConfig,
}

impl MetricsPlan {
    pub fn from_args(args: &MetricsArgs) -> Result<Self> {
        let bad = |e: &dyn std::fmt::Display| CliError::input(e.to_string());
        let clip = |k: usize| -> Result<ClipConfig> {
            ClipConfig::new(k)
                .map_err(|e| bad(&e))?
                .with_mode(args.mode)
                .with_adaptive_threshold(args.adaptive_threshold)
                .map_err(|e| bad(&e))
        };
        let mut ks: Vec<usize> = std::iter::once(args.k).chain(args.k_sweep.iter().copied()).collect();
        ks.sort_unstable();
        ks.dedup();
        let kclip = ks.iter().map(|&k| clip(k)).collect::<Result<Vec<_>>>()?;
        let bridges = BridgeConfig::new(args.jaccard_threshold)
            .map_err(|e| bad(&e))?
            .with_max_followers(args.max_followers);
        Ok(MetricsPlan {
            ks,
            report: ReportConfig {
                kclip,
                bridge_clip: clip(args.k)?,
                bridges: Some(bridges),
            },
        })
    }
}

/// Computes one row per distinct ego, sorted by id. Output does not depend on `jobs`.
pub fn compute_metrics(g: &FollowGraph, egos: &[NodeId], plan: &MetricsPlan, jobs: usize) -> Result<Vec<MetricsRow>> {
    let mut egos = egos.to_vec();
    egos.sort_unstable();
    egos.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::input(format!("cannot start worker pool: {e}")))?;
    let row = |&ego: &NodeId| {
        if !g.contains(ego) {
            return MetricsRow {
                ego,
                report: None,
                skip: Skip::UnknownEgo,
            };
        }
        let report = diversity_report(g, ego, &plan.report).expect("ego is in the graph");
        let skip = if report.bridged_skipped { Skip::MaxFollowers } else { Skip::None };
        MetricsRow {
            ego,
            report: Some(report),
            skip,
        }
    };
    Ok(pool.install(|| egos.par_iter().map(row).collect()))
}

pub fn metrics_header(ks: &[usize]) -> Vec<String> {
    let mut h: Vec<String> = ["ego", "indegree", "weak", "strong"].iter().map(|s| s.to_string()).collect();
    h.extend(ks.iter().map(|k| format!("kclip_{k}")));
    h.push("bridged_kclip".into());
    h.push("skipped".into());
    h
}

fn cells(row: &MetricsRow, ks: &[usize]) -> Vec<Option<usize>> {
    let r = row.report.as_ref();
    let mut v = vec![r.map(|r| r.indegree), r.map(|r| r.weak), r.map(|r| r.strong)];
    v.extend(ks.iter().map(|k| r.and_then(|r| r.kclip.get(k).copied())));
    v.push(r.and_then(|r| r.bridged_kclip));
    v
}

pub fn write_metrics<W: Write>(out: &mut W, rows: &[MetricsRow], ks: &[usize], format: Format) -> std::io::Result<()> {
    let header = metrics_header(ks);
    match format {
        Format::Csv => {
            writeln!(out, "{}", schema_line(METRICS_KIND))?;
            writeln!(out, "{}", header.join(","))?;
            for row in rows {
                let mut line = row.ego.to_string();
                for c in cells(row, ks) {
                    line.push(',');
                    if let Some(x) = c {
                        line.push_str(&x.to_string());
                    }
                }
                line.push(',');
                line.push_str(row.skip.as_str());
                writeln!(out, "{line}")?;
            }
        }
        Format::Jsonl => {
            // Keys follow the CSV column order.
            for row in rows {
                let mut fields = vec![format!("\"ego\":\"{}\"", row.ego)];
                for (name, c) in header[1..header.len() - 1].iter().zip(cells(row, ks)) {
                    fields.push(format!("\"{name}\":{}", c.map_or("null".to_string(), |x| x.to_string())));
                }
                let skip = row.skip.as_str();
                fields.push(if skip.is_empty() { "\"skipped\":null".into() } else { format!("\"skipped\":\"{skip}\"") });
                writeln!(out, "{{{}}}", fields.join(","))?;
            }
        }
    }
    Ok(())
}

pub fn cmd_metrics(args: &MetricsArgs) -> Result<usize> {
    let plan = MetricsPlan::from_args(args)?;
    let g = read_graph(&args.edges)?;
    let egos = match &args.egos {
        Some(p) => read_ids(p)?,
        None => g.nodes().to_vec(),
    };
    let rows = compute_metrics(&g, &egos, &plan, args.jobs)?;
    let out_path = args.out.as_deref();
    let mut out = open_write(out_path)?;
    write_metrics(&mut out, &rows, &plan.ks, args.format).map_err(write_err(out_path))?;
    out.flush().map_err(write_err(out_path))?;
    Ok(rows.len())
}
