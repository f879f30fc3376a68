//! The quadratic game with individual linear equality coupling constraints:
//! n players, joint action x ∈ R^{nd}, costs
//! J_i(x) = ½xᵀQ_i x + r_iᵀx + k_i with Q_i symmetric and convex in the
//! player's own block, and per-player feasible sets A_i x = b_i.
//!
//! Players interacting with the solvers never see Q_i, r_i or A_i: the
//! [`PlayerOracle`] trait exposes exactly two queries, the local cost value
//! and the local constraint residual.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{dot, matvec, symmetric_eigen, DenseMatrix, DenseVector, NumericsError};

/// Relative asymmetry in Q_i beyond this is rejected rather than silently
/// symmetrized, to avoid masking data errors.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Own-block eigenvalues of ½(Q_i+Q_iᵀ) may undershoot zero by this much
/// (relative to the block scale) and still count as convex.
pub const CONVEXITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("failed to read game file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse game document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid game:\n{0}")]
    Invalid(ValidationReport),
    #[error("player index {index} out of range (n = {n})")]
    PlayerIndex { index: usize, n: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Game configuration document: `n`, `d`, and one entry per player holding
/// Q (row-major nested arrays), r, k, A, b. `A`/`b` may be omitted or empty
/// for an unconstrained player.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    pub d: usize,
    pub players: Vec<PlayerConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlayerConfig {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    pub r: Vec<f64>,
    #[serde(default)]
    pub k: f64,
    #[serde(rename = "A", default)]
    pub a: Vec<Vec<f64>>,
    #[serde(default)]
    pub b: Vec<f64>,
}

impl GameConfig {
    pub fn from_json_str(text: &str) -> Result<Self, GameError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, GameError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Validates and builds the immutable game.
    pub fn into_game(self) -> Result<QuadraticGame, GameError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(GameError::Invalid(report));
        }
        let nd = self.n * self.d;
        let players = self
            .players
            .into_iter()
            .map(|p| {
                let m_i = p.a.len();
                let mut a_data = Vec::with_capacity(m_i * nd);
                for row in &p.a {
                    a_data.extend_from_slice(row);
                }
                PlayerData {
                    q: DenseMatrix::from_rows(&p.q).expect("validated"),
                    r: DenseVector::new(p.r).expect("validated"),
                    k: p.k,
                    a: DenseMatrix::new(m_i, nd, a_data).expect("validated"),
                    b: DenseVector::new(p.b).expect("validated"),
                }
            })
            .collect();
        Ok(QuadraticGame {
            n: self.n,
            d: self.d,
            players,
        })
    }
}

/// One player's private data.
#[derive(Debug, Clone)]
pub struct PlayerData {
    pub q: DenseMatrix,
    pub r: DenseVector,
    pub k: f64,
    pub a: DenseMatrix,
    pub b: DenseVector,
}

impl PlayerData {
    pub fn constraint_count(&self) -> usize {
        self.a.rows()
    }
}

/// Validated, immutable game; all evaluations are pure and thread-safe.
#[derive(Debug, Clone)]
pub struct QuadraticGame {
    n: usize,
    d: usize,
    players: Vec<PlayerData>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Structure {
        message: String,
    },
    Dimension {
        player: usize,
        field: &'static str,
        expected: usize,
        got: usize,
    },
    NonFinite {
        player: usize,
        field: &'static str,
    },
    Asymmetry {
        player: usize,
        relative: f64,
    },
    NonConvexOwnBlock {
        player: usize,
        min_eigenvalue: f64,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Structure { message } => write!(f, "{message}"),
            Violation::Dimension {
                player,
                field,
                expected,
                got,
            } => write!(
                f,
                "player {player}: {field} has wrong dimension (expected {expected}, got {got})"
            ),
            Violation::NonFinite { player, field } => {
                write!(f, "player {player}: {field} contains a non-finite entry")
            }
            Violation::Asymmetry { player, relative } => write!(
                f,
                "player {player}: Q is asymmetric (relative asymmetry {relative:.3e} > {SYMMETRY_TOL:.0e})"
            ),
            Violation::NonConvexOwnBlock {
                player,
                min_eigenvalue,
            } => write!(
                f,
                "player {player}: own-block of Q is not positive semidefinite (min eigenvalue {min_eigenvalue:.6e})"
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

fn finite_rows(rows: &[Vec<f64>]) -> bool {
    rows.iter().all(|r| r.iter().all(|v| v.is_finite()))
}

/// Checks dimensions, finiteness, Q symmetry and own-block convexity;
/// reports every violation with its player index instead of failing fast.
pub fn validate(config: &GameConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    if config.n == 0 || config.d == 0 {
        report.violations.push(Violation::Structure {
            message: format!(
                "n and d must be at least 1 (n = {}, d = {})",
                config.n, config.d
            ),
        });
        return report;
    }
    if config.players.len() != config.n {
        report.violations.push(Violation::Structure {
            message: format!(
                "expected {} player entries, found {}",
                config.n,
                config.players.len()
            ),
        });
        return report;
    }
    let nd = config.n * config.d;
    for (i, p) in config.players.iter().enumerate() {
        let mut dims_ok = true;
        if p.q.len() != nd || p.q.iter().any(|row| row.len() != nd) {
            let got =
                p.q.iter()
                    .map(|r| r.len())
                    .max()
                    .unwrap_or(0)
                    .max(p.q.len());
            report.violations.push(Violation::Dimension {
                player: i,
                field: "Q",
                expected: nd,
                got,
            });
            dims_ok = false;
        }
        if p.r.len() != nd {
            report.violations.push(Violation::Dimension {
                player: i,
                field: "r",
                expected: nd,
                got: p.r.len(),
            });
            dims_ok = false;
        }
        if p.a.iter().any(|row| row.len() != nd) {
            let got = p.a.iter().map(|r| r.len()).find(|&l| l != nd).unwrap_or(0);
            report.violations.push(Violation::Dimension {
                player: i,
                field: "A",
                expected: nd,
                got,
            });
            dims_ok = false;
        }
        if p.b.len() != p.a.len() {
            report.violations.push(Violation::Dimension {
                player: i,
                field: "b",
                expected: p.a.len(),
                got: p.b.len(),
            });
            dims_ok = false;
        }
        if !finite_rows(&p.q) || !p.r.iter().all(|v| v.is_finite()) || !p.k.is_finite() {
            report.violations.push(Violation::NonFinite {
                player: i,
                field: "Q/r/k",
            });
            dims_ok = false;
        }
        if !finite_rows(&p.a) || !p.b.iter().all(|v| v.is_finite()) {
            report.violations.push(Violation::NonFinite {
                player: i,
                field: "A/b",
            });
            dims_ok = false;
        }
        if !dims_ok {
            continue;
        }

        let q = DenseMatrix::from_rows(&p.q).expect("shape checked");
        let asym = q.relative_asymmetry();
        if asym > SYMMETRY_TOL {
            report.violations.push(Violation::Asymmetry {
                player: i,
                relative: asym,
            });
        }

        // Own-block convexity of the symmetrized Q.
        let d = config.d;
        let sym = q.symmetrized();
        let mut block = DenseMatrix::zeros(d, d);
        for br in 0..d {
            for bc in 0..d {
                block.set(br, bc, sym.get(i * d + br, i * d + bc));
            }
        }
        let (evals, _) = symmetric_eigen(&block).expect("square block");
        let min_eig = evals.last().copied().unwrap_or(0.0);
        let scale = block.max_abs().max(1.0);
        if min_eig < -CONVEXITY_TOL * scale {
            report.violations.push(Violation::NonConvexOwnBlock {
                player: i,
                min_eigenvalue: min_eig,
            });
        }
    }
    report
}

impl QuadraticGame {
    pub fn from_json_str(text: &str) -> Result<Self, GameError> {
        GameConfig::from_json_str(text)?.into_game()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, GameError> {
        GameConfig::from_path(path)?.into_game()
    }

    pub fn player_count(&self) -> usize {
        self.n
    }

    pub fn action_dim(&self) -> usize {
        self.d
    }

    pub fn joint_dim(&self) -> usize {
        self.n * self.d
    }

    pub fn player(&self, i: usize) -> &PlayerData {
        &self.players[i]
    }

    pub fn constraint_count(&self, i: usize) -> usize {
        self.players[i].constraint_count()
    }

    pub fn total_constraints(&self) -> usize {
        self.players.iter().map(|p| p.constraint_count()).sum()
    }

    /// Prefix offsets of each player's dual block in the stacked λ vector
    /// (length n + 1).
    pub fn lambda_offsets(&self) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.n + 1);
        let mut acc = 0;
        offs.push(0);
        for p in &self.players {
            acc += p.constraint_count();
            offs.push(acc);
        }
        offs
    }

    fn check_player(&self, i: usize) -> Result<(), GameError> {
        if i >= self.n {
            return Err(GameError::PlayerIndex {
                index: i,
                n: self.n,
            });
        }
        Ok(())
    }

    /// J_i at the joint action.
    pub fn eval_cost(&self, i: usize, x: &[f64]) -> Result<f64, GameError> {
        self.check_player(i)?;
        let p = &self.players[i];
        let qx = matvec(&p.q, x)?;
        Ok(0.5 * dot(x, &qx) + dot(&p.r, x) + p.k)
    }

    /// A_i x − b_i, length m_i.
    pub fn eval_residual(&self, i: usize, x: &[f64]) -> Result<DenseVector, GameError> {
        self.check_player(i)?;
        let p = &self.players[i];
        let mut ax = matvec(&p.a, x)?;
        for (v, b) in ax.iter_mut().zip(p.b.iter()) {
            *v -= b;
        }
        Ok(ax)
    }

    /// The i-th d-row block of ½(Q_i + Q_iᵀ): the own-block gradient map,
    /// ∇_{x^i}J_i(x) = H_i x + r_i^i.
    pub fn h_block(&self, i: usize) -> DenseMatrix {
        let d = self.d;
        let nd = self.joint_dim();
        let sym = self.players[i].q.symmetrized();
        let mut h = DenseMatrix::zeros(d, nd);
        for row in 0..d {
            for col in 0..nd {
                h.set(row, col, sym.get(i * d + row, col));
            }
        }
        h
    }

    /// Own d-block of r_i.
    pub fn r_own_block(&self, i: usize) -> &[f64] {
        &self.players[i].r[i * self.d..(i + 1) * self.d]
    }

    /// The m_i×d column block of A_i for player i's variables; its
    /// transpose carries the duals into the stationarity condition.
    pub fn a_own_columns(&self, i: usize) -> DenseMatrix {
        let p = &self.players[i];
        let d = self.d;
        let m_i = p.constraint_count();
        let mut out = DenseMatrix::zeros(m_i, d);
        for row in 0..m_i {
            for col in 0..d {
                out.set(row, col, p.a.get(row, i * d + col));
            }
        }
        out
    }

    /// Value-only access handle for player i.
    pub fn oracle(&self, i: usize) -> GameOracle<'_> {
        GameOracle {
            game: self,
            player: i,
        }
    }

    pub fn oracles(&self) -> Vec<GameOracle<'_>> {
        (0..self.n).map(|i| self.oracle(i)).collect()
    }
}

/// The zero-order information interface: a player observes only their local
/// cost value and their local constraint residual at a query point. No
/// implementation of this trait may reveal matrices or other players' data.
pub trait PlayerOracle {
    /// J_i at the query point.
    fn cost(&self, x: &[f64]) -> Result<f64, GameError>;

    /// A_i x − b_i at the query point.
    fn residual(&self, x: &[f64]) -> Result<DenseVector, GameError>;

    /// Number of local constraints m_i (the dual dimension).
    fn constraint_count(&self) -> usize;

    /// Local Lagrangian L_i(x, λ^i) = J_i(x) + ⟨λ^i, A_i x − b_i⟩, built
    /// strictly from the two value queries.
    fn lagrangian(&self, x: &[f64], lambda_i: &[f64]) -> Result<f64, GameError> {
        if lambda_i.len() != self.constraint_count() {
            return Err(GameError::Numerics(NumericsError::DimensionMismatch {
                op: "lagrangian",
                expected: self.constraint_count(),
                got: lambda_i.len(),
            }));
        }
        let res = self.residual(x)?;
        Ok(self.cost(x)? + dot(lambda_i, &res))
    }

    /// c_i(x) = ‖A_i x − b_i‖², the constraint part of the local objective.
    fn constraint_violation_sq(&self, x: &[f64]) -> Result<f64, GameError> {
        Ok(self.residual(x)?.norm_sq())
    }
}

/// Oracle backed by a game instance; exposes nothing beyond the trait.
#[derive(Debug, Clone, Copy)]
pub struct GameOracle<'g> {
    game: &'g QuadraticGame,
    player: usize,
}

impl PlayerOracle for GameOracle<'_> {
    fn cost(&self, x: &[f64]) -> Result<f64, GameError> {
        self.game.eval_cost(self.player, x)
    }

    fn residual(&self, x: &[f64]) -> Result<DenseVector, GameError> {
        self.game.eval_residual(self.player, x)
    }

    fn constraint_count(&self) -> usize {
        self.game.constraint_count(self.player)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// Smallest eigenvalue of the symmetric part of the pseudo-gradient
    /// Jacobian col(H_i).
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub is_monotone: bool,
}

/// Monotonicity of the game mapping M(x) = [∇_{x^1}J_1, …, ∇_{x^n}J_n]:
/// M is affine with Jacobian col(H_i), so M is monotone iff the symmetric
/// part of that Jacobian is positive semidefinite.
pub fn pseudo_gradient_monotonicity(game: &QuadraticGame) -> MonotonicityReport {
    let nd = game.joint_dim();
    let d = game.action_dim();
    let mut jac = DenseMatrix::zeros(nd, nd);
    for i in 0..game.player_count() {
        let h = game.h_block(i);
        for row in 0..d {
            for col in 0..nd {
                jac.set(i * d + row, col, h.get(row, col));
            }
        }
    }
    let (evals, _) = symmetric_eigen(&jac.symmetrized()).expect("square");
    let lambda_max = evals.first().copied().unwrap_or(0.0);
    let lambda_min = evals.last().copied().unwrap_or(0.0);
    let scale = lambda_max.abs().max(lambda_min.abs()).max(1.0);
    MonotonicityReport {
        lambda_min,
        lambda_max,
        is_monotone: lambda_min >= -1e-10 * scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn paper_fixture() -> GameConfig {
        let text = include_str!("../../../fixtures/paper_example.json");
        GameConfig::from_json_str(text).unwrap()
    }

    #[test]
    fn paper_fixture_is_valid() {
        let report = paper_fixture().validate();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn asymmetric_q_is_rejected_with_player_index() {
        let mut cfg = paper_fixture();
        cfg.players[1].q[0][1] = 5.0; // breaks symmetry of Q_2
        let report = cfg.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Asymmetry { player: 1, .. })));
    }

    #[test]
    fn non_convex_own_block_is_rejected() {
        let mut cfg = paper_fixture();
        // Player 0's own block becomes -I.
        cfg.players[0].q[0][0] = -1.0;
        cfg.players[0].q[0][1] = 0.0;
        cfg.players[0].q[1][0] = 0.0;
        cfg.players[0].q[1][1] = -1.0;
        let report = cfg.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonConvexOwnBlock { player: 0, .. })));
    }

    #[test]
    fn wrong_column_count_is_rejected() {
        let mut cfg = paper_fixture();
        cfg.players[0].a[0].pop();
        let report = cfg.validate();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Dimension {
                player: 0,
                field: "A",
                ..
            }
        )));
    }

    #[test]
    fn constant_cost_game() {
        let cfg = GameConfig {
            n: 1,
            d: 2,
            players: vec![PlayerConfig {
                q: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
                r: vec![0.0, 0.0],
                k: 5.0,
                a: vec![],
                b: vec![],
            }],
        };
        let game = cfg.into_game().unwrap();
        assert_eq!(game.eval_cost(0, &[3.0, -1.0]).unwrap(), 5.0);
        assert!(game.eval_residual(0, &[3.0, -1.0]).unwrap().is_empty());
    }

    #[test]
    fn paper_costs_at_solution() {
        // Frozen by direct arithmetic: J_1 = ½·260 − 260, J_2 = ½·209 − 216.5.
        let game = paper_fixture().into_game().unwrap();
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((game.eval_cost(0, &x).unwrap() - (-130.0)).abs() < 1e-12);
        assert!((game.eval_cost(1, &x).unwrap() - (-112.0)).abs() < 1e-12);
    }

    #[test]
    fn residuals_vanish_at_solution() {
        let game = paper_fixture().into_game().unwrap();
        let x = [1.0, 2.0, 3.0, 4.0];
        for i in 0..2 {
            let res = game.eval_residual(i, &x).unwrap();
            assert!(res.iter().all(|v| v.abs() < 1e-14), "player {i}: {res:?}");
        }
    }

    #[test]
    fn cost_difference_is_linear_when_q_is_zero() {
        let cfg = GameConfig {
            n: 2,
            d: 1,
            players: vec![
                PlayerConfig {
                    q: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
                    r: vec![2.0, -3.0],
                    k: 1.0,
                    a: vec![],
                    b: vec![],
                },
                PlayerConfig {
                    q: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
                    r: vec![0.5, 0.5],
                    k: 0.0,
                    a: vec![],
                    b: vec![],
                },
            ],
        };
        let game = cfg.into_game().unwrap();
        let x = [1.0, 4.0];
        let y = [-2.0, 7.0];
        let diff = game.eval_cost(0, &x).unwrap() - game.eval_cost(0, &y).unwrap();
        let expected = 2.0 * (x[0] - y[0]) + (-3.0) * (x[1] - y[1]);
        assert!((diff - expected).abs() < 1e-12);
    }

    #[test]
    fn lagrangian_reduces_to_cost() {
        let game = paper_fixture().into_game().unwrap();
        let oracle = game.oracle(0);
        let x = [0.5, -1.0, 2.0, 0.0];
        // λ = 0 collapses to the raw cost.
        let l0 = oracle.lagrangian(&x, &[0.0, 0.0]).unwrap();
        assert_eq!(l0, oracle.cost(&x).unwrap());
        // At a feasible point the residual term vanishes for any λ.
        let xs = [1.0, 2.0, 3.0, 4.0];
        let l = oracle.lagrangian(&xs, &[5.0, 7.0]).unwrap();
        assert!((l - oracle.cost(&xs).unwrap()).abs() < 1e-12);
        assert!((l - (-130.0)).abs() < 1e-12);
    }

    #[test]
    fn lagrangian_matches_cost_plus_dual_residual() {
        let game = paper_fixture().into_game().unwrap();
        let mut rng = RngStream::new(21);
        for i in 0..2 {
            let oracle = game.oracle(i);
            for _ in 0..50 {
                let x: Vec<f64> = (0..4).map(|_| 3.0 * rng.std_normal()).collect();
                let lam: Vec<f64> = (0..oracle.constraint_count())
                    .map(|_| rng.std_normal())
                    .collect();
                let lhs = oracle.lagrangian(&x, &lam).unwrap();
                let rhs = oracle.cost(&x).unwrap() + dot(&lam, &oracle.residual(&x).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn own_block_midpoint_convexity() {
        let game = paper_fixture().into_game().unwrap();
        let d = game.action_dim();
        let mut rng = RngStream::new(33);
        for i in 0..game.player_count() {
            for _ in 0..100 {
                let base: Vec<f64> = (0..4).map(|_| 2.0 * rng.std_normal()).collect();
                let mut x1 = base.clone();
                let mut x2 = base.clone();
                for c in 0..d {
                    x1[i * d + c] = 2.0 * rng.std_normal();
                    x2[i * d + c] = 2.0 * rng.std_normal();
                }
                let mid: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 0.5 * (a + b)).collect();
                let j1 = game.eval_cost(i, &x1).unwrap();
                let j2 = game.eval_cost(i, &x2).unwrap();
                let jm = game.eval_cost(i, &mid).unwrap();
                let scale = 1.0 + j1.abs() + j2.abs();
                assert!(jm <= 0.5 * j1 + 0.5 * j2 + 1e-9 * scale);
            }
        }
    }

    #[test]
    fn identity_game_is_monotone() {
        // Q_i = I for all players at d = 1 stacks to the identity Jacobian.
        let cfg = GameConfig {
            n: 2,
            d: 1,
            players: (0..2)
                .map(|_| PlayerConfig {
                    q: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                    r: vec![0.0, 0.0],
                    k: 0.0,
                    a: vec![],
                    b: vec![],
                })
                .collect(),
        };
        let game = cfg.into_game().unwrap();
        let rep = pseudo_gradient_monotonicity(&game);
        assert!((rep.lambda_min - 1.0).abs() < 1e-12);
        assert!(rep.is_monotone);
    }

    #[test]
    fn single_player_convex_game_is_monotone() {
        let game =
            QuadraticGame::from_json_str(include_str!("../../../fixtures/single_player.json"))
                .unwrap();
        let rep = pseudo_gradient_monotonicity(&game);
        assert!(rep.is_monotone);
        assert!((rep.lambda_min - 2.0).abs() < 1e-12);
    }

    #[test]
    fn paper_fixture_pseudo_gradient_spectrum() {
        // Frozen from a high-precision eigen oracle on the fixture's
        // col(H_i): the stacked Jacobian is strictly diagonally dominant,
        // so the mapping is (strongly) monotone.
        let game = paper_fixture().into_game().unwrap();
        let rep = pseudo_gradient_monotonicity(&game);
        assert!((rep.lambda_min - 5.130611455399269).abs() < 1e-9);
        assert!((rep.lambda_max - 8.593929048446721).abs() < 1e-9);
        assert!(rep.is_monotone);
    }

    #[test]
    fn h_blocks_of_paper_fixture() {
        let game = paper_fixture().into_game().unwrap();
        let h1 = game.h_block(0);
        assert_eq!(h1.row(0), &[7.0, 1.0, 1.0, 0.0]);
        assert_eq!(h1.row(1), &[1.0, 7.0, 0.0, 1.0]);
        let h2 = game.h_block(1);
        assert_eq!(h2.row(0), &[-3.5, 1.0, 7.0, 0.0]);
        assert_eq!(h2.row(1), &[1.0, 0.0, 0.0, 7.0]);
    }
}
