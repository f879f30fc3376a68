//! Monte-Carlo checks of the block-projector Gaussian moment identities
//! that justify the zero-order gradient estimator.
//!
//! For u ~ N(0, I_nd) split into n blocks of size d, with P_j the
//! orthogonal projector onto block j:
//!
//!   E[⟨a,u⟩⟨b,u⟩‖u^j‖²]        = aᵀ(d·I + 2P_j)b
//!   E[⟨a,u⟩⟨b,u⟩(‖u^j‖² − d)]  = 2 aᵀP_j b
//!   E[⟨b,u⟩²(‖u^j‖² − d)]      = 2 ‖P_j b‖²
//!   E[⟨a,u⟩ u]                 = a   (component-wise, reported on block j)

use super::{dot, NumericsError, RngStream};
use crate::parallel::{indexed_map, Parallelism};

const CHUNK: usize = 8192;

/// One estimated identity: Monte-Carlo mean against its closed form.
#[derive(Debug, Clone)]
pub struct IdentityEstimate {
    pub label: String,
    pub estimate: f64,
    pub closed_form: f64,
    pub std_error: f64,
}

impl IdentityEstimate {
    /// Whether the estimate sits within `band` standard errors of the
    /// closed form (with a small absolute floor for exact cases).
    pub fn within(&self, band: f64) -> bool {
        (self.estimate - self.closed_form).abs() <= band * self.std_error + 1e-12
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub samples: usize,
    pub items: Vec<IdentityEstimate>,
}

impl IdentityReport {
    pub fn all_within(&self, band: f64) -> bool {
        self.items.iter().all(|i| i.within(band))
    }
}

struct Accum {
    sums: Vec<f64>,
    sq_sums: Vec<f64>,
}

/// Estimates all four identities for the given (a, b, block_j)
/// configuration. The key4 identity uses q := a and is reported for every
/// coordinate of block j.
#[allow(clippy::too_many_arguments)]
pub fn gaussian_identity_check(
    a: &[f64],
    b: &[f64],
    block_j: usize,
    d: usize,
    n: usize,
    samples: usize,
    rng: &RngStream,
    par: Parallelism,
) -> Result<IdentityReport, NumericsError> {
    let nd = n * d;
    if a.len() != nd {
        return Err(NumericsError::DimensionMismatch {
            op: "gaussian_identity_check",
            expected: nd,
            got: a.len(),
        });
    }
    if b.len() != nd || block_j >= n {
        return Err(NumericsError::DimensionMismatch {
            op: "gaussian_identity_check",
            expected: nd,
            got: b.len(),
        });
    }

    // key1..key3 are scalars; key4 contributes one statistic per
    // coordinate of block j.
    let stats = 3 + d;
    let chunks = samples.div_ceil(CHUNK);
    let partials = indexed_map(par, chunks, |chunk| {
        let mut stream = rng.child(&[0x1D, chunk as u64]);
        let lo = chunk * CHUNK;
        let hi = ((chunk + 1) * CHUNK).min(samples);
        let mut acc = Accum {
            sums: vec![0.0; stats],
            sq_sums: vec![0.0; stats],
        };
        let mut u = vec![0.0; nd];
        for _ in lo..hi {
            for v in u.iter_mut() {
                *v = stream.std_normal();
            }
            let au = dot(a, &u);
            let bu = dot(b, &u);
            let uj = &u[block_j * d..(block_j + 1) * d];
            let unj = dot(uj, uj);
            let centered = unj - d as f64;
            let vals_head = [au * bu * unj, au * bu * centered, bu * bu * centered];
            for (s, v) in vals_head.iter().enumerate() {
                acc.sums[s] += v;
                acc.sq_sums[s] += v * v;
            }
            for (c, &ujc) in uj.iter().enumerate() {
                let v = au * ujc;
                acc.sums[3 + c] += v;
                acc.sq_sums[3 + c] += v * v;
            }
        }
        acc
    });

    let mut sums = vec![0.0; stats];
    let mut sq_sums = vec![0.0; stats];
    for p in partials {
        for s in 0..stats {
            sums[s] += p.sums[s];
            sq_sums[s] += p.sq_sums[s];
        }
    }

    let nf = samples as f64;
    let stderr = |s: usize| {
        let mean = sums[s] / nf;
        let var = (sq_sums[s] / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        (var / nf).sqrt()
    };

    let aj = &a[block_j * d..(block_j + 1) * d];
    let bj = &b[block_j * d..(block_j + 1) * d];
    let closed = [
        d as f64 * dot(a, b) + 2.0 * dot(aj, bj),
        2.0 * dot(aj, bj),
        2.0 * dot(bj, bj),
    ];
    let mut items = Vec::with_capacity(stats);
    for (s, label) in ["key1", "key2", "key3"].iter().enumerate() {
        items.push(IdentityEstimate {
            label: label.to_string(),
            estimate: sums[s] / nf,
            closed_form: closed[s],
            std_error: stderr(s),
        });
    }
    for c in 0..d {
        items.push(IdentityEstimate {
            label: format!("key4[{}]", block_j * d + c),
            estimate: sums[3 + c] / nf,
            closed_form: aj[c],
            std_error: stderr(3 + c),
        });
    }
    Ok(IdentityReport { samples, items })
}
