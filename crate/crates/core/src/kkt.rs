//! KKT least-squares reformulation of the GNE problem.
//!
//! Stationarity and feasibility of every player are stacked into the affine
//! system Gz + e, z = [x, λ], and the gap function F(z) = ‖Gz + e‖² is the
//! convex objective whose zeros are exactly the primal-dual GNE pairs:
//!
//!   G = [ H_stk  Aᵀ_blk ]      e = [ r_stk  ]
//!       [ A_stk     0   ]          [ −b_stk ]
//!
//! with H_stk = col(H_i), A_stk = col(A_i), Aᵀ_blk the block diagonal of
//! the per-player own-column blocks A_{i(i,:)}ᵀ, r_stk the stacked own
//! blocks r_i^i and b_stk the stacked right-hand sides. Because F is a
//! squared affine map it satisfies the Polyak–Łojasiewicz inequality
//! ‖∇F(z)‖² ≥ 2μ_F·F(z) with μ_F = 2(σ_min⁺(G))².

use thiserror::Error;

use crate::game::QuadraticGame;
use crate::numerics::{
    matvec, matvec_transposed, norm, singular_values_extreme, DenseMatrix, DenseVector,
    NumericsError,
};

#[derive(Debug, Error)]
pub enum KktError {
    #[error("degenerate game: G is numerically zero")]
    DegenerateGame,
    #[error("player index {index} out of range (n = {n})")]
    PlayerIndex { index: usize, n: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Primal-dual point z = [x, λ] stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalDual {
    z: DenseVector,
    nd: usize,
}

impl PrimalDual {
    pub fn zeros(nd: usize, m: usize) -> Self {
        Self {
            z: DenseVector::zeros(nd + m),
            nd,
        }
    }

    pub fn from_parts(x: &[f64], lambda: &[f64]) -> Self {
        let mut z = Vec::with_capacity(x.len() + lambda.len());
        z.extend_from_slice(x);
        z.extend_from_slice(lambda);
        Self {
            z: DenseVector::from(z),
            nd: x.len(),
        }
    }

    pub fn from_joint(z: DenseVector, nd: usize) -> Self {
        assert!(nd <= z.len());
        Self { z, nd }
    }

    pub fn joint(&self) -> &[f64] {
        &self.z
    }

    pub fn joint_mut(&mut self) -> &mut [f64] {
        &mut self.z
    }

    pub fn x(&self) -> &[f64] {
        &self.z[..self.nd]
    }

    pub fn lambda(&self) -> &[f64] {
        &self.z[self.nd..]
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite()
    }
}

/// The assembled reformulation with its spectral constants.
#[derive(Debug, Clone)]
pub struct KktSystem {
    g: DenseMatrix,
    e: DenseVector,
    h_blocks: Vec<DenseMatrix>,
    n: usize,
    d: usize,
    nd: usize,
    m: usize,
    lambda_offsets: Vec<usize>,
    sigma_max: f64,
    sigma_min_positive: f64,
    kernel_dim: usize,
    mu_f: f64,
    l_f: f64,
}

/// The per-player own-block gradient maps H_i = ½[Q_i + Q_iᵀ]_{(i,:)}.
pub fn build_h_blocks(game: &QuadraticGame) -> Vec<DenseMatrix> {
    (0..game.player_count()).map(|i| game.h_block(i)).collect()
}

/// Builds G, e and the PL/smoothness constants for a validated game.
pub fn assemble(game: &QuadraticGame) -> Result<KktSystem, KktError> {
    let n = game.player_count();
    let d = game.action_dim();
    let nd = game.joint_dim();
    let m = game.total_constraints();
    let dim = nd + m;
    let lambda_offsets = game.lambda_offsets();
    let h_blocks = build_h_blocks(game);

    let mut g = DenseMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];

    for i in 0..n {
        // H_stk rows.
        let h = &h_blocks[i];
        for row in 0..d {
            for col in 0..nd {
                g.set(i * d + row, col, h.get(row, col));
            }
        }
        // Aᵀ_blk: own-column block of A_i, transposed, on the block diagonal.
        let a_own = game.a_own_columns(i);
        for row in 0..a_own.rows() {
            for col in 0..d {
                g.set(
                    i * d + col,
                    nd + lambda_offsets[i] + row,
                    a_own.get(row, col),
                );
            }
        }
        // A_stk rows.
        let p = game.player(i);
        for row in 0..p.a.rows() {
            for col in 0..nd {
                g.set(nd + lambda_offsets[i] + row, col, p.a.get(row, col));
            }
        }
        // e = [r_stk; -b_stk].
        e[i * d..(i + 1) * d].copy_from_slice(game.r_own_block(i));
        for (row, &b) in p.b.iter().enumerate() {
            e[nd + lambda_offsets[i] + row] = -b;
        }
    }

    let extremes = singular_values_extreme(&g).map_err(|err| match err {
        NumericsError::ZeroMatrix => KktError::DegenerateGame,
        other => KktError::Numerics(other),
    })?;

    Ok(KktSystem {
        g,
        e: DenseVector::from(e),
        h_blocks,
        n,
        d,
        nd,
        m,
        lambda_offsets,
        sigma_max: extremes.sigma_max,
        sigma_min_positive: extremes.sigma_min_positive,
        kernel_dim: extremes.kernel_dim,
        mu_f: 2.0 * extremes.sigma_min_positive * extremes.sigma_min_positive,
        l_f: 2.0 * extremes.sigma_max * extremes.sigma_max,
    })
}

impl KktSystem {
    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    pub fn e(&self) -> &DenseVector {
        &self.e
    }

    pub fn h_blocks(&self) -> &[DenseMatrix] {
        &self.h_blocks
    }

    pub fn player_count(&self) -> usize {
        self.n
    }

    pub fn action_dim(&self) -> usize {
        self.d
    }

    pub fn primal_dim(&self) -> usize {
        self.nd
    }

    pub fn dual_dim(&self) -> usize {
        self.m
    }

    pub fn joint_dim(&self) -> usize {
        self.nd + self.m
    }

    pub fn lambda_offsets(&self) -> &[usize] {
        &self.lambda_offsets
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    pub fn sigma_min_positive(&self) -> f64 {
        self.sigma_min_positive
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// PL constant μ_F = 2(σ_min⁺(G))².
    pub fn mu_f(&self) -> f64 {
        self.mu_f
    }

    /// Gradient Lipschitz constant L_F = 2σ_max(G)².
    pub fn l_f(&self) -> f64 {
        self.l_f
    }

    pub fn zeros(&self) -> PrimalDual {
        PrimalDual::zeros(self.nd, self.m)
    }

    fn check_dim(&self, z: &PrimalDual) -> Result<(), KktError> {
        if z.joint().len() != self.joint_dim() || z.nd != self.nd {
            return Err(KktError::Numerics(NumericsError::DimensionMismatch {
                op: "kkt point",
                expected: self.joint_dim(),
                got: z.joint().len(),
            }));
        }
        Ok(())
    }

    /// The stacked KKT residual Gz + e.
    pub fn residual_vector(&self, z: &PrimalDual) -> Result<DenseVector, KktError> {
        self.check_dim(z)?;
        let mut w = matvec(&self.g, z.joint())?;
        for (wi, ei) in w.iter_mut().zip(self.e.iter()) {
            *wi += ei;
        }
        Ok(w)
    }

    /// Gap value F(z) = ‖Gz + e‖²; zero exactly at the KKT solutions.
    pub fn gap(&self, z: &PrimalDual) -> Result<f64, KktError> {
        Ok(self.residual_vector(z)?.norm_sq())
    }

    /// Exact gradient ∇F(z) = 2Gᵀ(Gz + e).
    pub fn gap_gradient(&self, z: &PrimalDual) -> Result<DenseVector, KktError> {
        let w = self.residual_vector(z)?;
        let mut grad = matvec_transposed(&self.g, &w)?;
        for v in grad.iter_mut() {
            *v *= 2.0;
        }
        Ok(grad)
    }

    /// The x^i and λ^i blocks of the exact gradient.
    pub fn gap_partials(
        &self,
        z: &PrimalDual,
        i: usize,
    ) -> Result<(DenseVector, DenseVector), KktError> {
        if i >= self.n {
            return Err(KktError::PlayerIndex {
                index: i,
                n: self.n,
            });
        }
        let grad = self.gap_gradient(z)?;
        let x_part = grad[i * self.d..(i + 1) * self.d].to_vec();
        let lo = self.nd + self.lambda_offsets[i];
        let hi = self.nd + self.lambda_offsets[i + 1];
        let lambda_part = grad[lo..hi].to_vec();
        Ok((DenseVector::from(x_part), DenseVector::from(lambda_part)))
    }

    /// Default certification tolerance 1e-8·(1 + ‖e‖²).
    pub fn default_certificate_tolerance(&self) -> f64 {
        1e-8 * (1.0 + self.e.norm_sq())
    }

    /// Checks a candidate primal-dual pair against the per-player KKT
    /// conditions; accepts iff the gap is within `tol`.
    pub fn certify_gne(&self, z: &PrimalDual, tol: f64) -> Result<Certificate, KktError> {
        assert!(tol > 0.0, "certification tolerance must be positive");
        let w = self.residual_vector(z)?;
        let mut players = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let stat = norm(&w[i * self.d..(i + 1) * self.d]);
            let lo = self.nd + self.lambda_offsets[i];
            let hi = self.nd + self.lambda_offsets[i + 1];
            let feas = norm(&w[lo..hi]);
            players.push(PlayerCertificate {
                stationarity_norm: stat,
                residual_norm: feas,
            });
        }
        let gap = w.norm_sq();
        Ok(Certificate {
            gap,
            tolerance: tol,
            accepted: gap <= tol,
            players,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerCertificate {
    /// ‖H_i x + r_i^i + A_{i(i,:)}ᵀλ^i‖
    pub stationarity_norm: f64,
    /// ‖A_i x − b_i‖
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub gap: f64,
    pub tolerance: f64,
    pub accepted: bool,
    pub players: Vec<PlayerCertificate>,
}
