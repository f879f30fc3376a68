//! Dense linear-algebra kernels, spectral quantities, a minimum-norm
//! least-squares solve, and seeded Gaussian sampling.
//!
//! Everything here is self-contained and sized for small dense problems
//! (a few hundred rows at most): matrices are row-major `Vec<f64>`, the
//! eigensolver is cyclic Jacobi, and accuracy is preferred over speed.

mod eigen;
mod identities;
mod rng;

pub use eigen::{
    min_norm_least_squares, singular_values, singular_values_extreme, svd_right, symmetric_eigen,
    SingularExtremes,
};
pub use identities::{gaussian_identity_check, IdentityEstimate, IdentityReport};
pub use rng::{sample_std_normal, RngStream};

use thiserror::Error;

/// Relative eigenvalue threshold below which cyclic Jacobi stops sweeping.
pub(crate) const JACOBI_TOL: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("matrix is numerically zero; no positive singular value above the rank tolerance")]
    ZeroMatrix,
    #[error("Jacobi eigen iteration did not converge after {sweeps} sweeps")]
    EigenNotConverged { sweeps: usize },
}

/// Dense column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    /// Builds a vector, rejecting NaN/inf entries.
    pub fn new(data: Vec<f64>) -> Result<Self, NumericsError> {
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self { data })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![0.0; len],
        }
    }

    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

impl std::ops::Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.data
    }
}

impl std::ops::DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(data: Vec<f64>) -> Self {
        Self { data }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::DimensionMismatch {
                op: "DenseMatrix::new",
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumericsError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(NumericsError::DimensionMismatch {
                    op: "DenseMatrix::from_rows",
                    expected: ncols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// ½(M + Mᵀ); requires a square matrix.
    pub fn symmetrized(&self) -> DenseMatrix {
        assert_eq!(self.rows, self.cols, "symmetrized requires a square matrix");
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, 0.5 * (self.get(i, j) + self.get(j, i)));
            }
        }
        out
    }

    /// Relative asymmetry max|M − Mᵀ| / max(1, max|M|).
    pub fn relative_asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let scale = self.max_abs().max(1.0);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix, NumericsError> {
        if self.cols != other.rows {
            return Err(NumericsError::DimensionMismatch {
                op: "matmul",
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// MᵀM, the Gram matrix used by the eigen-based singular value routines.
    pub fn gram(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for p in 0..self.cols {
                let a = row[p];
                if a == 0.0 {
                    continue;
                }
                for (q, &rq) in row.iter().enumerate().skip(p) {
                    out.data[p * self.cols + q] += a * rq;
                }
            }
        }
        for p in 0..self.cols {
            for q in 0..p {
                out.data[p * self.cols + q] = out.data[q * self.cols + p];
            }
        }
        out
    }
}

/// Exact dense product M·v.
pub fn matvec(m: &DenseMatrix, v: &[f64]) -> Result<DenseVector, NumericsError> {
    if m.cols() != v.len() {
        return Err(NumericsError::DimensionMismatch {
            op: "matvec",
            expected: m.cols(),
            got: v.len(),
        });
    }
    let out = (0..m.rows()).map(|i| dot(m.row(i), v)).collect();
    Ok(DenseVector::from_raw(out))
}

/// Mᵀ·v without forming the transpose.
pub fn matvec_transposed(m: &DenseMatrix, v: &[f64]) -> Result<DenseVector, NumericsError> {
    if m.rows() != v.len() {
        return Err(NumericsError::DimensionMismatch {
            op: "matvec_transposed",
            expected: m.rows(),
            got: v.len(),
        });
    }
    let mut out = vec![0.0; m.cols()];
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0.0 {
            continue;
        }
        for (o, &mij) in out.iter_mut().zip(m.row(i)) {
            *o += vi * mij;
        }
    }
    Ok(DenseVector::from_raw(out))
}
