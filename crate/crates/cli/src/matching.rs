//! Propensity-matched comparison of max-diversity egos against the rest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use socdiv::diversity::is_max_diversity;
use socdiv::graph::NodeId;
use socdiv::stats::{bootstrap_ci, paired_t_test, propensity_match, MatchOptions, StatsError, TTestResult};

use crate::dataset::{log10p1, Dataset, ReputationSource};
use crate::error::{CliError, Result};
use crate::io::{fnv1a, open_write, write_err};

/// Post-match SMD below which a covariate counts as balanced.
pub const BALANCE_THRESHOLD: f64 = 0.1;
pub const OUTCOME: &str = "reputation_index";

#[derive(Debug, Clone)]
pub struct MatchArgs {
    pub metrics: PathBuf,
    pub reputation: ReputationSource,
    pub covariates: Option<PathBuf>,
    pub k: usize,
    /// Covariate columns; `None` takes every column of the covariates file.
    pub covariate_names: Option<Vec<String>>,
    pub log_vars: Vec<String>,
    pub min_indegree: usize,
    pub caliper: Option<f64>,
    pub resamples: usize,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl MatchArgs {
    /// Seed from the non-path configuration when none is given.
    pub fn effective_seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            fnv1a(&format!(
                "match;k={};covariates={:?};log={:?};min_indegree={};caliper={:?};resamples={}",
                self.k, self.covariate_names, self.log_vars, self.min_indegree, self.caliper, self.resamples
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub mean: f64,
    pub ci95: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub seed: u64,
    pub k: usize,
    pub outcome: &'static str,
    pub covariates: Vec<String>,
    pub n_units: usize,
    pub n_dropped: usize,
    pub n_treated: usize,
    pub n_control: usize,
    pub n_matched: usize,
    pub logistic_iterations: usize,
    pub smd: BTreeMap<String, f64>,
    pub max_smd: f64,
    pub balanced: bool,
    pub treated: GroupSummary,
    pub control: GroupSummary,
    pub paired_t: Option<TTestResult>,
    pub paired_t_error: Option<String>,
    /// `(treated, control)` ids as decimal strings.
    pub pairs: Vec<(String, String)>,
}

struct Units {
    ids: Vec<NodeId>,
    treated: Vec<bool>,
    outcome: Vec<f64>,
    covariates: Vec<(String, Vec<f64>)>,
    n_dropped: usize,
}

fn collect_units(data: &Dataset, args: &MatchArgs) -> Result<Units> {
    let kcol = format!("kclip_{}", args.k);
    let indegree = data.column("indegree")?;
    let kclip = data.column(&kcol)?;
    let outcome = data.column(OUTCOME)?;
    let names = match &args.covariate_names {
        Some(n) => n.clone(),
        None => data.columns("covariates"),
    };
    let mut cov_raw = Vec::new();
    for name in &names {
        cov_raw.push((name.clone(), data.column(name)?));
    }

    let mut u = Units {
        ids: Vec::new(),
        treated: Vec::new(),
        outcome: Vec::new(),
        covariates: std::iter::once("indegree".to_string())
            .chain(names.iter().cloned())
            .map(|n| (n, Vec::new()))
            .collect(),
        n_dropped: 0,
    };
    for (i, &id) in data.ids.iter().enumerate() {
        let (Some(d), Some(kc), Some(y)) = (indegree[i], kclip[i], outcome[i]) else {
            u.n_dropped += 1;
            continue;
        };
        if d < args.min_indegree as f64 {
            continue;
        }
        let Some(row) = cov_raw.iter().map(|(_, c)| c[i]).collect::<Option<Vec<f64>>>() else {
            u.n_dropped += 1;
            continue;
        };
        u.ids.push(id);
        u.treated.push(is_max_diversity(kc as usize, d as usize));
        u.outcome.push(y);
        u.covariates[0].1.push(log10p1(d));
        for ((name, col), x) in u.covariates[1..].iter_mut().zip(row) {
            if args.log_vars.contains(name) {
                if x < 0.0 {
                    return Err(CliError::input(format!("`{name}` of user {id} is negative and cannot be logged")));
                }
                col.push(log10p1(x));
            } else {
                col.push(x);
            }
        }
    }
    Ok(u)
}

pub fn run_match(data: &Dataset, args: &MatchArgs) -> Result<MatchReport> {
    let seed = args.effective_seed();
    let units = collect_units(data, args)?;
    let n_treated = units.treated.iter().filter(|&&t| t).count();
    let n_control = units.treated.len() - n_treated;
    if n_treated == 0 || n_control == 0 {
        return Err(CliError::Infeasible(format!(
            "{n_treated} treated and {n_control} control units after filtering; both groups must be non-empty"
        )));
    }
    let opts = MatchOptions { caliper: args.caliper };
    let m = propensity_match(&units.ids, &units.covariates, &units.treated, &opts).map_err(|e| match e {
        StatsError::NoUnits(_) => CliError::Infeasible(e.to_string()),
        other => CliError::input(format!("propensity model: {other}")),
    })?;
    if m.n_matched == 0 {
        return Err(CliError::Infeasible("no pairs within the caliper".into()));
    }
    let yt: Vec<f64> = m.pair_indices.iter().map(|&(t, _)| units.outcome[t]).collect();
    let yc: Vec<f64> = m.pair_indices.iter().map(|&(_, c)| units.outcome[c]).collect();
    let summary = |v: &[f64], s: u64| -> Result<GroupSummary> {
        let ci = bootstrap_ci(v, args.resamples, 0.95, s).map_err(|e| CliError::input(e.to_string()))?;
        Ok(GroupSummary {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            ci95: ci,
        })
    };
    let (paired_t, paired_t_error) = match paired_t_test(&yt, &yc) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let max_smd = m.smd_per_covariate.values().copied().fold(0.0, f64::max);
    Ok(MatchReport {
        seed,
        k: args.k,
        outcome: OUTCOME,
        covariates: units.covariates.iter().map(|(n, _)| n.clone()).collect(),
        n_units: units.ids.len(),
        n_dropped: units.n_dropped,
        n_treated,
        n_control,
        n_matched: m.n_matched,
        logistic_iterations: m.logistic_iterations,
        balanced: m.smd_per_covariate.values().all(|&s| s < BALANCE_THRESHOLD),
        smd: m.smd_per_covariate,
        max_smd,
        treated: summary(&yt, seed)?,
        control: summary(&yc, seed.wrapping_add(1))?,
        paired_t,
        paired_t_error,
        pairs: m.pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    })
}

/// Human-readable summary for stderr.
pub fn summary_text(r: &MatchReport) -> String {
    let mut s = format!(
        "seed {}: {} treated, {} control, {} matched pairs\n",
        r.seed, r.n_treated, r.n_control, r.n_matched
    );
    for (name, v) in &r.smd {
        s.push_str(&format!("  SMD {name:<16} {v:.4}\n"));
    }
    s.push_str(&format!(
        "  treated mean {:.4} [{:.4}, {:.4}]\n  control mean {:.4} [{:.4}, {:.4}]\n",
        r.treated.mean, r.treated.ci95.0, r.treated.ci95.1, r.control.mean, r.control.ci95.0, r.control.ci95.1
    ));
    match (&r.paired_t, &r.paired_t_error) {
        (Some(t), _) => s.push_str(&format!("  paired t({}) = {:.3}, p = {:.3e}\n", t.df, t.t, t.p)),
        (None, Some(e)) => s.push_str(&format!("  paired t unavailable: {e}\n")),
        (None, None) => {}
    }
    s
}

pub fn cmd_match(args: &MatchArgs) -> Result<MatchReport> {
    let data = Dataset::load(&args.metrics, &args.reputation, args.covariates.as_deref())?;
    let report = run_match(&data, args)?;
    let out_path = args.out.as_deref();
    let mut out = open_write(out_path)?;
    let text = serde_json::to_string_pretty(&report).expect("plain data");
    writeln!(out, "{text}").map_err(write_err(out_path))?;
    out.flush().map_err(write_err(out_path))?;
    Ok(report)
}
