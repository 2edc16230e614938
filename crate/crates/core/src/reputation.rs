//! Social reputation index: log-transformed popularity counts reduced to one
//! non-negative factor by NMF and rescaled to `[0, 100]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;
use crate::rng::SplitMix64;

pub const DEFAULT_NMF_TOL: f64 = 1e-10;
pub const DEFAULT_NMF_MAX_ITER: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum ReputationError {
    #[error("no popularity records")]
    Empty,
    #[error("factorization rank must be at least 1")]
    InvalidRank,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("matrix entry ({row}, {col}) = {value} is negative or not finite")]
    InvalidEntry { row: usize, col: usize, value: f64 },
    #[error("matrix data length {len} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopularityRecord {
    pub user: NodeId,
    pub upvotes: u64,
    pub thanks: u64,
    pub favorites: u64,
}

impl PopularityRecord {
    pub fn log_counts(&self) -> [f64; 3] {
        [
            log_transform(self.upvotes),
            log_transform(self.thanks),
            log_transform(self.favorites),
        ]
    }
}

/// `log10(x + 1)`.
pub fn log_transform(x: u64) -> f64 {
    (x as f64 + 1.0).log10()
}

/// Dense non-negative matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PopularityMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, ReputationError> {
        if data.len() != rows * cols {
            return Err(ReputationError::Shape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(ReputationError::InvalidEntry {
                row: pos / cols,
                col: pos % cols,
                value: data[pos],
            });
        }
        Ok(PopularityMatrix { rows, cols, data })
    }

    /// One row per record: log-transformed upvotes, thanks and favorites.
    pub fn from_records(records: &[PopularityRecord]) -> Self {
        let data = records.iter().flat_map(|r| r.log_counts()).collect();
        PopularityMatrix {
            rows: records.len(),
            cols: 3,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Every entry multiplied by `factor` (must be non-negative).
    pub fn scaled(&self, factor: f64) -> Result<Self, ReputationError> {
        Self::new(self.rows, self.cols, self.data.iter().map(|x| x * factor).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmfOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NmfOptions {
    fn default() -> Self {
        NmfOptions {
            tol: DEFAULT_NMF_TOL,
            max_iter: DEFAULT_NMF_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmfResult {
    pub rank: usize,
    /// `n x rank`, row-major.
    pub w: Vec<f64>,
    /// `rank x m`, row-major.
    pub h: Vec<f64>,
    /// Frobenius norm of `V - W H`.
    pub reconstruction_error: f64,
    pub iterations: usize,
    /// Error after initialization, then after every accepted update.
    pub error_history: Vec<f64>,
}

impl NmfResult {
    pub fn w_column(&self, j: usize) -> Vec<f64> {
        self.w.iter().skip(j).step_by(self.rank).copied().collect()
    }
}

fn reconstruction_error(v: &PopularityMatrix, w: &[f64], h: &[f64], r: usize) -> f64 {
    let (n, m) = (v.rows, v.cols);
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..m {
            let approx: f64 = (0..r).map(|a| w[i * r + a] * h[a * m + j]).sum();
            let d = v.get(i, j) - approx;
            sum += d * d;
        }
    }
    sum.sqrt()
}

/// Leading singular pair of a non-negative matrix by alternating rank-1
/// least squares. Both factors stay non-negative; `w` carries the scale.
fn leading_pair(v: &PopularityMatrix) -> (Vec<f64>, Vec<f64>) {
    let (n, m) = (v.rows, v.cols);
    let mut w: Vec<f64> = (0..n).map(|i| v.row(i).iter().sum::<f64>()).collect();
    let mut h = vec![0.0; m];
    for _ in 0..10_000 {
        let ww: f64 = w.iter().map(|x| x * x).sum();
        for (j, hj) in h.iter_mut().enumerate() {
            *hj = (0..n).map(|i| v.get(i, j) * w[i]).sum::<f64>() / ww;
        }
        let hh: f64 = h.iter().map(|x| x * x).sum();
        let next: Vec<f64> = (0..n)
            .map(|i| v.row(i).iter().zip(&h).map(|(a, b)| a * b).sum::<f64>() / hh)
            .collect();
        let norm_prev = ww.sqrt();
        let norm_next = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        let drift = w
            .iter()
            .zip(&next)
            .map(|(a, b)| (a / norm_prev - b / norm_next).abs())
            .fold(0.0, f64::max);
        w = next;
        if drift < 1e-15 {
            break;
        }
    }
    let ww: f64 = w.iter().map(|x| x * x).sum();
    for (j, hj) in h.iter_mut().enumerate() {
        *hj = (0..n).map(|i| v.get(i, j) * w[i]).sum::<f64>() / ww;
    }
    (w, h)
}

/// Non-negative matrix factorization `V ≈ W H` with multiplicative updates
/// for the Frobenius loss.
///
/// The first factor starts at the leading singular pair, which is already the
/// optimal rank-1 factorization; additional factors start from small
/// deterministic positive values. Iteration stops when the relative error
/// improvement drops below `opts.tol`, after `opts.max_iter` updates, or when an
/// update would increase the error (it is then discarded).
pub fn nmf(v: &PopularityMatrix, r: usize, opts: &NmfOptions) -> Result<NmfResult, ReputationError> {
    if r == 0 {
        return Err(ReputationError::InvalidRank);
    }
    if !(opts.tol > 0.0) {
        return Err(ReputationError::InvalidTolerance(opts.tol));
    }
    let (n, m) = (v.rows, v.cols);
    if v.data.iter().all(|&x| x == 0.0) {
        return Ok(NmfResult {
            rank: r,
            w: vec![0.0; n * r],
            h: vec![0.0; r * m],
            reconstruction_error: 0.0,
            iterations: 0,
            error_history: vec![0.0],
        });
    }

    let (w0, h0) = leading_pair(v);
    let mut w = vec![0.0; n * r];
    let mut h = vec![0.0; r * m];
    let mut rng = SplitMix64::new(0x006e_6d66);
    let fill = 1e-2 * v.frobenius_norm() / ((n * m) as f64).sqrt();
    for i in 0..n {
        w[i * r] = w0[i];
        for a in 1..r {
            w[i * r + a] = fill * (0.5 + rng.next_f64());
        }
    }
    for j in 0..m {
        h[j] = h0[j];
        for a in 1..r {
            h[a * m + j] = fill * (0.5 + rng.next_f64());
        }
    }

    let mut err = reconstruction_error(v, &w, &h, r);
    let mut history = vec![err];
    let mut iterations = 0;
    while iterations < opts.max_iter && err > 0.0 {
        let (nw, nh) = multiplicative_step(v, &w, &h, r);
        let next_err = reconstruction_error(v, &nw, &nh, r);
        if next_err > err {
            break;
        }
        let improvement = (err - next_err) / err;
        w = nw;
        h = nh;
        err = next_err;
        history.push(err);
        iterations += 1;
        if improvement < opts.tol {
            break;
        }
    }

    Ok(NmfResult {
        rank: r,
        w,
        h,
        reconstruction_error: err,
        iterations,
        error_history: history,
    })
}

fn multiplicative_step(v: &PopularityMatrix, w: &[f64], h: &[f64], r: usize) -> (Vec<f64>, Vec<f64>) {
    let (n, m) = (v.rows, v.cols);
    let mut wtw = vec![0.0; r * r];
    for i in 0..n {
        for a in 0..r {
            for b in 0..r {
                wtw[a * r + b] += w[i * r + a] * w[i * r + b];
            }
        }
    }
    let mut nh = h.to_vec();
    for a in 0..r {
        for j in 0..m {
            let num: f64 = (0..n).map(|i| w[i * r + a] * v.get(i, j)).sum();
            let den: f64 = (0..r).map(|b| wtw[a * r + b] * h[b * m + j]).sum();
            if den > 0.0 {
                nh[a * m + j] = h[a * m + j] * num / den;
            }
        }
    }
    let mut hht = vec![0.0; r * r];
    for a in 0..r {
        for b in 0..r {
            hht[a * r + b] = (0..m).map(|j| nh[a * m + j] * nh[b * m + j]).sum();
        }
    }
    let mut nw = w.to_vec();
    for i in 0..n {
        for a in 0..r {
            let num: f64 = (0..m).map(|j| v.get(i, j) * nh[a * m + j]).sum();
            let den: f64 = (0..r).map(|b| w[i * r + b] * hht[b * r + a]).sum();
            if den > 0.0 {
                nw[i * r + a] = w[i * r + a] * num / den;
            }
        }
    }
    (nw, nh)
}

/// Reputation index values in `[0, 100]`, one per input row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReputationIndex {
    pub values: Vec<f64>,
}

/// `100 * (y - min) / (max - min)`; a constant input maps to all zeros.
pub fn normalize_to_100(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return vec![0.0; values.len()];
    }
    values.iter().map(|y| 100.0 * ((y - min) / (max - min))).collect()
}

/// Reputation index of an already log-transformed matrix.
pub fn reputation_index_from_matrix(v: &PopularityMatrix) -> Result<ReputationIndex, ReputationError> {
    if v.rows() == 0 {
        return Err(ReputationError::Empty);
    }
    let fit = nmf(v, 1, &NmfOptions::default())?;
    Ok(ReputationIndex {
        values: normalize_to_100(&fit.w_column(0)),
    })
}

pub fn social_reputation_index(records: &[PopularityRecord]) -> Result<ReputationIndex, ReputationError> {
    reputation_index_from_matrix(&PopularityMatrix::from_records(records))
}

/// Mean of the three log-transformed counts, per user.
pub fn ensemble_popularity(records: &[PopularityRecord]) -> Vec<f64> {
    records
        .iter()
        .map(|r| r.log_counts().iter().sum::<f64>() / 3.0)
        .collect()
}
