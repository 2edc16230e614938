use serde::{Deserialize, Serialize};

use super::dist::{t_critical, t_two_tailed_p};
use super::linalg::{least_squares, Matrix};
use super::{mean, StatsError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult {
    /// Intercept first when the design has an intercept column.
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub ci95: Vec<(f64, f64)>,
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub n_obs: usize,
    pub df_resid: usize,
    pub sigma: f64,
}

/// Ordinary least squares of `y` on the columns of `x`.
///
/// `x` should contain the intercept column; R² is computed against the mean of `y`.
pub fn ols(y: &[f64], x: &Matrix) -> Result<RegressionResult, StatsError> {
    let (n, p) = (x.rows(), x.cols());
    if y.len() != n {
        return Err(StatsError::LengthMismatch { expected: n, got: y.len() });
    }
    if n <= p {
        return Err(StatsError::TooFewObservations { needed: p + 1, got: n });
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite(i));
    }
    let ls = least_squares(x, y)?;
    let fitted = x.mul_vec(&ls.beta);
    let ssr: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
    let ybar = mean(y);
    let sst: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    let df = n - p;
    let sigma2 = ssr / df as f64;

    let r_squared = if sst > 0.0 { (1.0 - ssr / sst).clamp(0.0, 1.0) } else { 0.0 };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) as f64 / df as f64;
    let crit = t_critical(0.95, df as f64);

    let mut std_errors = Vec::with_capacity(p);
    let mut t_values = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    let mut ci95 = Vec::with_capacity(p);
    for (j, &b) in ls.beta.iter().enumerate() {
        let se = (sigma2 * ls.xtx_inv[j * p + j]).max(0.0).sqrt();
        let t = if se > 0.0 {
            b / se
        } else if b == 0.0 {
            0.0
        } else {
            b.signum() * f64::INFINITY
        };
        std_errors.push(se);
        t_values.push(t);
        p_values.push(t_two_tailed_p(t, df as f64));
        ci95.push((b - crit * se, b + crit * se));
    }

    Ok(RegressionResult {
        coefficients: ls.beta,
        std_errors,
        t_values,
        ci95,
        p_values,
        r_squared,
        adj_r_squared,
        n_obs: n,
        df_resid: df,
        sigma: sigma2.sqrt(),
    })
}
