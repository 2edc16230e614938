//! Regression and experiment machinery.

mod bootstrap;
pub mod dist;
mod hypothesis;
mod linalg;
mod ols;
mod psm;

use thiserror::Error;

pub use bootstrap::{bootstrap_ci, DEFAULT_RESAMPLES};
pub use hypothesis::{one_way_anova, paired_t_test, AnovaResult, TTestResult};
pub use linalg::Matrix;
pub use ols::{ols, RegressionResult};
pub use psm::{
    greedy_match, logistic_regression, propensity_match, standardized_mean_difference, LogisticFit, MatchOptions, MatchResult,
    LOGISTIC_MAX_ITER, LOGISTIC_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("empty input")]
    Empty,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("design matrix is rank deficient at column {column}")]
    SingularDesign { column: usize },
    #[error("differences have zero variance and nonzero mean {mean}; t is unbounded")]
    ZeroVariance { mean: f64 },
    #[error("need at least 2 groups, got {0}")]
    TooFewGroups(usize),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("no {0} units")]
    NoUnits(&'static str),
    #[error("logistic regression did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
}

/// `(x - min) / (max - min)`; a constant input maps to all zeros.
pub fn minmax_normalize(v: &[f64]) -> Result<Vec<f64>, StatsError> {
    if v.is_empty() {
        return Err(StatsError::Empty);
    }
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Ok(vec![0.0; v.len()]);
    }
    Ok(v.iter().map(|x| (x - min) / (max - min)).collect())
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample variance (n - 1 denominator); zero for fewer than two values.
pub(crate) fn sample_variance(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}
