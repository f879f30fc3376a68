//! Cyclic Jacobi eigen-decomposition of symmetric matrices and the
//! singular-value / pseudoinverse routines built on it.
//!
//! Singular values use the one-sided Jacobi variant: the same rotations as
//! cyclic Jacobi on MᵀM, applied implicitly by orthogonalizing the columns
//! of M. Working on M itself instead of the Gram matrix keeps full
//! relative accuracy for small singular values, so the rank tolerance
//! τ = ε·max(rows, cols)·σ_max separates true kernel directions cleanly.

use super::{DenseMatrix, DenseVector, NumericsError, JACOBI_TOL};

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition S = V diag(λ) Vᵀ of a symmetric matrix.
///
/// Returns eigenvalues in descending order with matching eigenvector
/// columns. The input is symmetrized first, so mild roundoff asymmetry is
/// tolerated.
pub fn symmetric_eigen(s: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix), NumericsError> {
    if s.rows() != s.cols() {
        return Err(NumericsError::DimensionMismatch {
            op: "symmetric_eigen",
            expected: s.rows(),
            got: s.cols(),
        });
    }
    let n = s.rows();
    let mut a = s.symmetrized();
    let mut v = DenseMatrix::identity(n);
    if n <= 1 {
        let evals = (0..n).map(|i| a.get(i, i)).collect();
        return Ok((evals, v));
    }

    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let tol = JACOBI_TOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).abs());
            }
        }
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol * 1e-3 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - sn * akq);
                    a.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - sn * aqk);
                    a.set(q, k, sn * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(NumericsError::EigenNotConverged { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).partial_cmp(&a.get(i, i)).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vecs = DenseMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs.set(row, col, v.get(row, src));
        }
    }
    Ok((evals, vecs))
}

/// One-sided Jacobi SVD: returns singular values in descending order, the
/// matching right singular vectors V (columns), and W = M·V whose columns
/// are σᵢ·uᵢ.
pub(crate) fn one_sided_jacobi(
    m: &DenseMatrix,
) -> Result<(Vec<f64>, DenseMatrix, DenseMatrix), NumericsError> {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = m.clone();
    let mut v = DenseMatrix::identity(cols);

    // Columns whose mutual products fall to the roundoff floor are pure
    // noise below the rank tolerance; rotating them forever would never
    // satisfy the relative criterion.
    let frob: f64 = m.data().iter().map(|x| x * x).sum::<f64>().sqrt();
    let noise_floor = (f64::EPSILON * frob) * (f64::EPSILON * frob);

    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..rows {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma.abs() <= (JACOBI_TOL * (alpha * beta).sqrt()).max(noise_floor) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.set(i, p, c * wp - s * wq);
                    w.set(i, q, s * wp + c * wq);
                }
                for i in 0..cols {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(NumericsError::EigenNotConverged { sweeps: MAX_SWEEPS });
    }

    let mut sigmas: Vec<(f64, usize)> = (0..cols)
        .map(|j| {
            let norm_sq: f64 = (0..rows).map(|i| w.get(i, j) * w.get(i, j)).sum();
            (norm_sq.sqrt(), j)
        })
        .collect();
    sigmas.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut v_sorted = DenseMatrix::zeros(cols, cols);
    let mut w_sorted = DenseMatrix::zeros(rows, cols);
    for (dst, &(_, src)) in sigmas.iter().enumerate() {
        for i in 0..cols {
            v_sorted.set(i, dst, v.get(i, src));
        }
        for i in 0..rows {
            w_sorted.set(i, dst, w.get(i, src));
        }
    }
    Ok((
        sigmas.into_iter().map(|(s, _)| s).collect(),
        v_sorted,
        w_sorted,
    ))
}

/// All singular values of M in descending order.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>, NumericsError> {
    Ok(one_sided_jacobi(m)?.0)
}

/// Singular values (descending) together with the right singular vectors
/// as the columns of the returned matrix.
pub fn svd_right(m: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix), NumericsError> {
    let (sigmas, v, _) = one_sided_jacobi(m)?;
    Ok((sigmas, v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularExtremes {
    pub sigma_max: f64,
    /// Smallest singular value strictly above the rank tolerance.
    pub sigma_min_positive: f64,
    /// Count of singular values at or below the rank tolerance.
    pub kernel_dim: usize,
    /// The rank tolerance τ = ε · max(rows, cols) · σ_max that was applied.
    pub rank_tolerance: f64,
}

/// Largest singular value and smallest singular value above the numerical
/// rank tolerance τ = ε_machine · max(rows, cols) · σ_max.
pub fn singular_values_extreme(m: &DenseMatrix) -> Result<SingularExtremes, NumericsError> {
    let sv = singular_values(m)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tau = f64::EPSILON * m.rows().max(m.cols()) as f64 * sigma_max;
    let positive: Vec<f64> = sv.iter().copied().filter(|&s| s > tau).collect();
    match positive.last() {
        Some(&sigma_min_positive) if sigma_max > 0.0 => Ok(SingularExtremes {
            sigma_max,
            sigma_min_positive,
            kernel_dim: sv.len() - positive.len(),
            rank_tolerance: tau,
        }),
        _ => Err(NumericsError::ZeroMatrix),
    }
}

/// Minimum-Euclidean-norm minimizer of ‖Mv − rhs‖.
///
/// Truncated pseudoinverse from the one-sided Jacobi factorization:
/// with wᵢ = Mvᵢ = σᵢuᵢ, v = Σ_{σᵢ>τ} vᵢ (wᵢᵀ rhs)/σᵢ². A numerically
/// zero M yields the zero vector, the min-norm minimizer of a constant
/// residual.
pub fn min_norm_least_squares(m: &DenseMatrix, rhs: &[f64]) -> Result<DenseVector, NumericsError> {
    if m.rows() != rhs.len() {
        return Err(NumericsError::DimensionMismatch {
            op: "min_norm_least_squares",
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    let (sigmas, v, w) = one_sided_jacobi(m)?;
    let sigma_max = sigmas.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(DenseVector::zeros(m.cols()));
    }
    let tau = f64::EPSILON * m.rows().max(m.cols()) as f64 * sigma_max;
    let n = m.cols();
    let mut out = vec![0.0; n];
    for (idx, &sigma) in sigmas.iter().enumerate() {
        if sigma <= tau {
            continue;
        }
        let mut proj = 0.0;
        for (row, &rhs_v) in rhs.iter().enumerate() {
            proj += w.get(row, idx) * rhs_v;
        }
        let coeff = proj / (sigma * sigma);
        for (row, o) in out.iter_mut().enumerate() {
            *o += coeff * v.get(row, idx);
        }
    }
    Ok(DenseVector::from_raw(out))
}
