use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::NodeId;

use super::linalg::{least_squares, Matrix};
use super::{mean, sample_variance, StatsError};

pub const LOGISTIC_MAX_ITER: usize = 100;
pub const LOGISTIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    /// Intercept first, then one coefficient per design column.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
}

impl LogisticFit {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let eta = self.coefficients[0] + self.coefficients[1..].iter().zip(row).map(|(b, x)| b * x).sum::<f64>();
        sigmoid(eta)
    }
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// Logistic regression by iteratively reweighted least squares. `x` holds the
/// predictors without an intercept column.
pub fn logistic_regression(x: &Matrix, y: &[bool], max_iter: usize, tol: f64) -> Result<LogisticFit, StatsError> {
    let (n, p) = (x.rows(), x.cols());
    if y.len() != n {
        return Err(StatsError::LengthMismatch { expected: n, got: y.len() });
    }
    let mut beta = vec![0.0; p + 1];
    let mut design = Matrix::zeros(n, p + 1);
    let mut z = vec![0.0; n];
    for iter in 1..=max_iter {
        for i in 0..n {
            let row = x.row(i);
            let eta = beta[0] + beta[1..].iter().zip(row).map(|(b, v)| b * v).sum::<f64>();
            let mu = sigmoid(eta);
            let w = (mu * (1.0 - mu)).max(1e-12);
            let sw = w.sqrt();
            let target = if y[i] { 1.0 } else { 0.0 };
            z[i] = sw * (eta + (target - mu) / w);
            design.set(i, 0, sw);
            for (j, &v) in row.iter().enumerate() {
                design.set(i, j + 1, sw * v);
            }
        }
        let next = least_squares(&design, &z)?.beta;
        if next.iter().any(|b| !b.is_finite()) {
            return Err(StatsError::NotConverged { iterations: iter });
        }
        let change = next.iter().zip(&beta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        beta = next;
        if change < tol {
            return Ok(LogisticFit {
                coefficients: beta,
                iterations: iter,
            });
        }
    }
    Err(StatsError::NotConverged { iterations: max_iter })
}

/// `|mean_T - mean_C| / sqrt((var_T + var_C) / 2)` with sample variances;
/// zero when both the numerator and the pooled spread vanish.
pub fn standardized_mean_difference(treated: &[f64], control: &[f64]) -> f64 {
    if treated.is_empty() || control.is_empty() {
        return f64::NAN;
    }
    let diff = (mean(treated) - mean(control)).abs();
    let pooled = ((sample_variance(treated) + sample_variance(control)) / 2.0).sqrt();
    if pooled == 0.0 {
        return if diff == 0.0 { 0.0 } else { f64::INFINITY };
    }
    diff / pooled
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchOptions {
    /// Maximum allowed score distance; `None` matches every treated unit while controls last.
    pub caliper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    /// `(treated, control)`, in matching order.
    pub pairs: Vec<(NodeId, NodeId)>,
    /// Row indices of `pairs`.
    pub pair_indices: Vec<(usize, usize)>,
    pub smd_per_covariate: BTreeMap<String, f64>,
    pub n_matched: usize,
    pub propensity: Vec<f64>,
    pub logistic_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score(f64);

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Greedy 1:1 nearest-neighbour matching without replacement.
///
/// Treated units are visited in descending score order (ties by row index);
/// each takes the closest remaining control, preferring the smaller row index
/// on equal distance.
pub fn greedy_match(scores: &[f64], treated: &[bool], caliper: Option<f64>) -> Vec<(usize, usize)> {
    let mut controls: BTreeSet<(Score, usize)> = (0..scores.len())
        .filter(|&i| !treated[i])
        .map(|i| (Score(scores[i]), i))
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).filter(|&i| treated[i]).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut pairs = Vec::new();
    for t in order {
        let s = scores[t];
        let upper = controls.range((Score(s), 0)..).next().copied();
        let lower = controls
            .range(..(Score(s), 0))
            .next_back()
            .and_then(|&(ls, _)| controls.range((ls, 0)..).next().copied());
        let best = match (lower, upper) {
            (None, None) => break,
            (Some(c), None) | (None, Some(c)) => c,
            (Some(l), Some(u)) => {
                let (dl, du) = (s - l.0 .0, u.0 .0 - s);
                match dl.total_cmp(&du) {
                    Ordering::Less => l,
                    Ordering::Greater => u,
                    Ordering::Equal => {
                        if l.1 < u.1 {
                            l
                        } else {
                            u
                        }
                    }
                }
            }
        };
        if caliper.is_some_and(|c| (best.0 .0 - s).abs() > c) {
            continue;
        }
        controls.remove(&best);
        pairs.push((t, best.1));
    }
    pairs
}

/// Propensity-score matching on named covariate columns.
///
/// Covariates are standardized before the logistic fit and constant columns are
/// left out of it; SMDs are reported for every covariate on the raw scale.
pub fn propensity_match(
    ids: &[NodeId],
    covariates: &[(String, Vec<f64>)],
    treated: &[bool],
    opts: &MatchOptions,
) -> Result<MatchResult, StatsError> {
    let n = ids.len();
    if treated.len() != n {
        return Err(StatsError::LengthMismatch { expected: n, got: treated.len() });
    }
    if !treated.iter().any(|&t| t) {
        return Err(StatsError::NoUnits("treated"));
    }
    if treated.iter().all(|&t| t) {
        return Err(StatsError::NoUnits("control"));
    }
    let mut columns = Vec::new();
    for (_, col) in covariates {
        if col.len() != n {
            return Err(StatsError::LengthMismatch { expected: n, got: col.len() });
        }
        if let Some(i) = col.iter().position(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite(i));
        }
        let m = mean(col);
        let sd = sample_variance(col).sqrt();
        if sd > 0.0 {
            columns.push(col.iter().map(|v| (v - m) / sd).collect::<Vec<f64>>());
        }
    }
    let design = if columns.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&columns)?
    };
    let fit = logistic_regression(&design, treated, LOGISTIC_MAX_ITER, LOGISTIC_TOL)?;
    let propensity: Vec<f64> = (0..n).map(|i| fit.predict(design.row(i))).collect();

    let pair_indices = greedy_match(&propensity, treated, opts.caliper);
    let smd_per_covariate = covariates
        .iter()
        .map(|(name, col)| {
            let t: Vec<f64> = pair_indices.iter().map(|&(a, _)| col[a]).collect();
            let c: Vec<f64> = pair_indices.iter().map(|&(_, b)| col[b]).collect();
            (name.clone(), standardized_mean_difference(&t, &c))
        })
        .collect();
    Ok(MatchResult {
        pairs: pair_indices.iter().map(|&(a, b)| (ids[a], ids[b])).collect(),
        n_matched: pair_indices.len(),
        pair_indices,
        smd_per_covariate,
        propensity,
        logistic_iterations: fit.iterations,
    })
}
