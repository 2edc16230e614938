//! OLS of a reputation measure on diversity metrics and covariates.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use socdiv::stats::{minmax_normalize, ols, Matrix, RegressionResult, StatsError};

use crate::dataset::{is_count_column, log10p1, Dataset, ReputationSource};
use crate::error::{CliError, Result};
use crate::io::{open_write, write_err};

#[derive(Debug, Clone)]
pub struct RegressArgs {
    pub metrics: PathBuf,
    pub reputation: ReputationSource,
    pub covariates: Option<PathBuf>,
    pub response: String,
    pub predictors: Vec<String>,
    /// Extra variables to log-transform on top of the count columns.
    pub log_vars: Vec<String>,
    /// Variables to leave untransformed even if they are counts.
    pub raw_vars: Vec<String>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableSummary {
    pub name: String,
    pub transform: &'static str,
    /// Range after the transform, before min-max scaling.
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressOutput {
    pub response: String,
    pub terms: Vec<String>,
    #[serde(flatten)]
    pub fit: RegressionResult,
    pub variables: Vec<VariableSummary>,
    /// Rows left out because a needed cell was empty.
    pub n_dropped: usize,
}

fn transform_name(logged: bool) -> &'static str {
    if logged {
        "log10(x+1)"
    } else {
        "identity"
    }
}

pub fn run_regression(data: &Dataset, args: &RegressArgs) -> Result<RegressOutput> {
    if args.predictors.is_empty() {
        return Err(CliError::input("at least one predictor is required"));
    }
    let names: Vec<&String> = std::iter::once(&args.response).chain(&args.predictors).collect();
    let mut seen = BTreeSet::new();
    for n in &names[1..] {
        if !seen.insert(n.as_str()) {
            return Err(CliError::input(format!("predictor `{n}` listed twice")));
        }
    }
    let raw: Vec<Vec<Option<f64>>> = names.iter().map(|n| data.column(n)).collect::<Result<_>>()?;
    let keep: Vec<usize> = (0..data.ids.len()).filter(|&i| raw.iter().all(|c| c[i].is_some())).collect();
    let n_dropped = data.ids.len() - keep.len();

    let mut variables = Vec::new();
    let mut scaled = Vec::new();
    for (name, col) in names.iter().zip(&raw) {
        let logged = (is_count_column(name) || args.log_vars.contains(name)) && !args.raw_vars.contains(name);
        let mut v = Vec::with_capacity(keep.len());
        for &i in &keep {
            let x = col[i].expect("kept rows are complete");
            if logged && x < 0.0 {
                return Err(CliError::input(format!("`{name}` of user {} is negative and cannot be logged", data.ids[i])));
            }
            v.push(if logged { log10p1(x) } else { x });
        }
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        variables.push(VariableSummary {
            name: name.to_string(),
            transform: transform_name(logged),
            min,
            max,
        });
        scaled.push(minmax_normalize(&v).map_err(|e| CliError::input(format!("`{name}`: {e}")))?);
    }

    let y = scaled.remove(0);
    let design = Matrix::with_intercept(&scaled).map_err(|e| CliError::input(e.to_string()))?;
    let mut terms = vec!["intercept".to_string()];
    terms.extend(args.predictors.iter().cloned());
    let fit = ols(&y, &design).map_err(|e| match e {
        StatsError::SingularDesign { column } => CliError::input(format!(
            "singular design: `{}` is constant or collinear with earlier terms",
            terms[column]
        )),
        other => CliError::input(other.to_string()),
    })?;
    Ok(RegressOutput {
        response: args.response.clone(),
        terms,
        fit,
        variables,
        n_dropped,
    })
}

pub fn cmd_regress(args: &RegressArgs) -> Result<RegressOutput> {
    let data = Dataset::load(&args.metrics, &args.reputation, args.covariates.as_deref())?;
    let result = run_regression(&data, args)?;
    let out_path = args.out.as_deref();
    let mut out = open_write(out_path)?;
    let text = serde_json::to_string_pretty(&result).expect("plain data");
    writeln!(out, "{text}").map_err(write_err(out_path))?;
    out.flush().map_err(write_err(out_path))?;
    Ok(result)
}
