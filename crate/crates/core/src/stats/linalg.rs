//! Small dense matrices and Householder least squares.

use super::StatsError;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, StatsError> {
        if data.len() != rows * cols {
            return Err(StatsError::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self, StatsError> {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(StatsError::LengthMismatch {
                    expected: rows,
                    got: col.len(),
                });
            }
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Design matrix with a leading column of ones followed by `predictors`.
    pub fn with_intercept(predictors: &[Vec<f64>]) -> Result<Self, StatsError> {
        let rows = predictors.first().map_or(0, Vec::len);
        let mut columns = Vec::with_capacity(predictors.len() + 1);
        columns.push(vec![1.0; rows]);
        columns.extend(predictors.iter().cloned());
        Self::from_columns(&columns)
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

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Solution of a full-rank least-squares problem.
#[derive(Debug, Clone)]
pub(crate) struct LeastSquares {
    pub beta: Vec<f64>,
    /// `(X^T X)^{-1}`, row-major `p x p`.
    pub xtx_inv: Vec<f64>,
}

/// Minimizes `|X b - y|` by Householder QR. Fails on (numerically) rank-deficient `X`.
pub(crate) fn least_squares(x: &Matrix, y: &[f64]) -> Result<LeastSquares, StatsError> {
    let (n, p) = (x.rows, x.cols);
    if y.len() != n {
        return Err(StatsError::LengthMismatch { expected: n, got: y.len() });
    }
    if n < p {
        return Err(StatsError::TooFewObservations { needed: p, got: n });
    }
    // Column-major working copy; R ends up in the upper triangle.
    let mut a: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let mut qty = y.to_vec();
    let col_scale: Vec<f64> = a
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();

    for k in 0..p {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-10 * col_scale[k].max(f64::MIN_POSITIVE)) {
            return Err(StatsError::SingularDesign { column: k });
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            let s = 2.0 * dot / vnorm2;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= s * vi;
            }
        };
        for col in a.iter_mut().skip(k + 1) {
            reflect(&mut col[k..]);
        }
        reflect(&mut qty[k..]);
        a[k][k] = alpha;
        for t in a[k][k + 1..].iter_mut() {
            *t = 0.0;
        }
    }

    // Back substitution for beta and for R^{-1}.
    let r = |i: usize, j: usize| a[j][i];
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = ((i + 1)..p).map(|j| r(i, j) * beta[j]).sum();
        beta[i] = (qty[i] - s) / r(i, i);
    }
    let mut rinv = vec![0.0; p * p];
    for j in 0..p {
        rinv[j * p + j] = 1.0 / r(j, j);
        for i in (0..j).rev() {
            let s: f64 = ((i + 1)..=j).map(|m| r(i, m) * rinv[m * p + j]).sum();
            rinv[i * p + j] = -s / r(i, i);
        }
    }
    let mut xtx_inv = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            xtx_inv[i * p + j] = (i.max(j)..p).map(|m| rinv[i * p + m] * rinv[j * p + m]).sum();
        }
    }
    Ok(LeastSquares { beta, xtx_inv })
}
