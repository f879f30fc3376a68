//! The fully distributed zero-order procedure.
//!
//! One synchronous round at joint action x and duals λ:
//!
//! 1. Every player i samples ξ_x^i, η^i ~ N(0, I_d) and ξ_λ^i ~ N(0, I_{m_i}).
//! 2. Four joint query points are formed from the stacked draws:
//!    x̃_1 = x − ση, x̃_2 = x + ση, x̃_3 = x + δξ_x − ση, x̃_4 = x + δξ_x + ση.
//! 3. Player i samples her local Lagrangian at [x̃_1, λ^i], [x̃_2, λ^i],
//!    [x̃_3, λ^i + δξ_λ^i], [x̃_4, λ^i + δξ_λ^i] and her constraint
//!    violation at x̃_1, x̃_2, forming the two-point differences
//!    Δ_1 = (L(y_2) − L(y_1))/2σ, Δ_2 = (L(y_4) − L(y_3))/2σ,
//!    Δ_3 = (c(x̃_2) − c(x̃_1))/2σ, and the squared directional increments
//!    S_1 = (Δ_2² − Δ_1²)/δ, S_2 = S_1‖η^i‖².
//! 4. The aggregator sums (½(S_2 − d·S_1), Δ_3) over players and
//!    broadcasts S and D back.
//! 5. Player i sets ζ_{x^i} = S·ξ_x^i + D·η^i and
//!    ζ_{λ^i} = ½(S_2 − d·S_1)·ξ_λ^i, then steps
//!    x^i ← x^i − γ_t ζ_{x^i}, λ^i ← λ^i − γ_t ζ_{λ^i}.
//!
//! For quadratic costs the two-point differences are exact directional
//! derivatives, which makes ζ an unbiased estimate of the corresponding
//! gap-gradient blocks for any σ, δ > 0.
//!
//! Players touch nothing but their [`PlayerOracle`], their own draws and
//! the broadcast pair; the generic [`solve_zero_order_with_oracles`] entry
//! point makes that a compile-time property.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameError, PlayerOracle, QuadraticGame};
use crate::kkt::{KktError, KktSystem, PrimalDual};
use crate::numerics::{dot, DenseVector, RngStream};
use crate::trace::{Trace, TraceOptions, TraceRow};

/// Stream-derivation tags for the per-player, per-round child streams.
/// Draws are keyed by (seed, t, player, role) so adding a player never
/// perturbs the other players' sequences.
const ROLE_XI_X: u64 = 1;
const ROLE_XI_LAMBDA: u64 = 2;
const ROLE_ETA: u64 = 3;

#[derive(Debug, Error)]
pub enum ZoError {
    #[error("invalid zero-order configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite oracle value")]
    NonFiniteSample,
    #[error("player {player} faulted at iteration {iteration}: non-finite oracle value")]
    PlayerFault { player: usize, iteration: u64 },
    #[error("divergence at iteration {iteration}: non-finite iterate")]
    Divergence { iteration: u64 },
    #[error("aggregator: missing contribution from player {player}")]
    MissingContribution { player: usize },
    #[error("aggregator: duplicate contribution from player {player}")]
    DuplicateContribution { player: usize },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Kkt(#[from] KktError),
}

/// Diminishing step rule γ(t) = c/(t + t0), either one global rule or one
/// rule per coordinate of the stacked (x, λ) vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSchedule {
    Global {
        g: f64,
        #[serde(default)]
        t0: f64,
    },
    PerCoordinate {
        coords: Vec<CoordinateStep>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinateStep {
    pub c: f64,
    #[serde(default)]
    pub t0: f64,
}

impl StepSchedule {
    /// The two-player example schedule: per-coordinate rates
    /// 0.006, 0.005, 0.015, 0.009 over (t + 500) for the four action
    /// coordinates and 0.001/(t + 1000) for all three duals.
    pub fn paper_example() -> Self {
        let mut coords: Vec<CoordinateStep> = [0.006, 0.005, 0.015, 0.009]
            .iter()
            .map(|&c| CoordinateStep { c, t0: 500.0 })
            .collect();
        coords.extend((0..3).map(|_| CoordinateStep {
            c: 0.001,
            t0: 1000.0,
        }));
        StepSchedule::PerCoordinate { coords }
    }

    pub fn gamma(&self, t: u64, coord: usize) -> f64 {
        match self {
            StepSchedule::Global { g, t0 } => g / (t as f64 + t0),
            StepSchedule::PerCoordinate { coords } => {
                let cs = &coords[coord];
                cs.c / (t as f64 + cs.t0)
            }
        }
    }

    /// Coordinate-0 step, reported in traces as `gamma_ref`.
    pub fn gamma_ref(&self, t: u64) -> f64 {
        self.gamma(t, 0)
    }

    fn validate(&self, dim: usize) -> Result<(), ZoError> {
        match self {
            StepSchedule::Global { g, t0 } => {
                if g.is_nan() || *g <= 0.0 || t0.is_nan() || *t0 < 0.0 {
                    return Err(ZoError::InvalidConfig(format!(
                        "global schedule needs g > 0 and t0 >= 0 (g = {g}, t0 = {t0})"
                    )));
                }
            }
            StepSchedule::PerCoordinate { coords } => {
                if coords.len() != dim {
                    return Err(ZoError::InvalidConfig(format!(
                        "per-coordinate schedule has {} rules for {} coordinates",
                        coords.len(),
                        dim
                    )));
                }
                for (i, cs) in coords.iter().enumerate() {
                    if cs.c.is_nan() || cs.c <= 0.0 || cs.t0.is_nan() || cs.t0 < 0.0 {
                        return Err(ZoError::InvalidConfig(format!(
                            "coordinate {i}: need c > 0 and t0 >= 0 (c = {}, t0 = {})",
                            cs.c, cs.t0
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZoConfig {
    pub sigma: f64,
    pub delta: f64,
    pub schedule: StepSchedule,
    pub max_iters: u64,
    pub seed: u64,
}

impl ZoConfig {
    fn validate(&self, dim: usize) -> Result<(), ZoError> {
        if !self.sigma.is_finite() || self.sigma <= 0.0 {
            return Err(ZoError::InvalidConfig(format!(
                "sigma must be finite and positive, got {}",
                self.sigma
            )));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 {
            return Err(ZoError::InvalidConfig(format!(
                "delta must be finite and positive, got {}",
                self.delta
            )));
        }
        if self.max_iters == 0 {
            return Err(ZoError::InvalidConfig("max_iters must be >= 1".into()));
        }
        self.schedule.validate(dim)
    }
}

/// The four joint query points of one round.
#[derive(Debug, Clone)]
pub struct QueryPoints {
    pub x1: DenseVector,
    pub x2: DenseVector,
    pub x3: DenseVector,
    pub x4: DenseVector,
}

/// x̃_1 = x − ση, x̃_2 = x + ση, x̃_3 = x + δξ_x − ση, x̃_4 = x + δξ_x + ση.
pub fn build_query_points(
    x: &[f64],
    sigma: f64,
    delta: f64,
    xi_x: &[f64],
    eta: &[f64],
) -> QueryPoints {
    let n = x.len();
    debug_assert_eq!(xi_x.len(), n);
    debug_assert_eq!(eta.len(), n);
    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    let mut x3 = Vec::with_capacity(n);
    let mut x4 = Vec::with_capacity(n);
    for i in 0..n {
        let shift = delta * xi_x[i];
        let probe = sigma * eta[i];
        x1.push(x[i] - probe);
        x2.push(x[i] + probe);
        x3.push(x[i] + shift - probe);
        x4.push(x[i] + shift + probe);
    }
    QueryPoints {
        x1: DenseVector::from_raw(x1),
        x2: DenseVector::from_raw(x2),
        x3: DenseVector::from_raw(x3),
        x4: DenseVector::from_raw(x4),
    }
}

/// What one player computes locally and sends to the aggregator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerContribution {
    /// ½(S_2 − d·S_1)
    pub s_term: f64,
    /// Δ_3
    pub residual_diff: f64,
}

/// Local quantities of one player's round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerRound {
    pub delta_1: f64,
    pub delta_2: f64,
    pub delta_3: f64,
    pub s_1: f64,
    pub s_2: f64,
    pub contribution: PlayerContribution,
}

/// One player's side of a round: samples the local Lagrangian at the four
/// query points and the constraint violation at the probe pair, strictly
/// through the value oracle.
#[allow(clippy::too_many_arguments)]
pub fn player_round<O: PlayerOracle>(
    oracle: &O,
    lambda_i: &[f64],
    points: &QueryPoints,
    xi_lambda_i: &[f64],
    eta_own: &[f64],
    sigma: f64,
    delta: f64,
    d: usize,
) -> Result<PlayerRound, ZoError> {
    let shifted_lambda: Vec<f64> = lambda_i
        .iter()
        .zip(xi_lambda_i)
        .map(|(l, xi)| l + delta * xi)
        .collect();

    let l1 = oracle.lagrangian(&points.x1, lambda_i)?;
    let l2 = oracle.lagrangian(&points.x2, lambda_i)?;
    let l3 = oracle.lagrangian(&points.x3, &shifted_lambda)?;
    let l4 = oracle.lagrangian(&points.x4, &shifted_lambda)?;
    let c1 = oracle.constraint_violation_sq(&points.x1)?;
    let c2 = oracle.constraint_violation_sq(&points.x2)?;
    if ![l1, l2, l3, l4, c1, c2].iter().all(|v| v.is_finite()) {
        return Err(ZoError::NonFiniteSample);
    }

    let delta_1 = (l2 - l1) / (2.0 * sigma);
    let delta_2 = (l4 - l3) / (2.0 * sigma);
    let delta_3 = (c2 - c1) / (2.0 * sigma);
    let s_1 = (delta_2 * delta_2 - delta_1 * delta_1) / delta;
    let s_2 = s_1 * dot(eta_own, eta_own);
    Ok(PlayerRound {
        delta_1,
        delta_2,
        delta_3,
        s_1,
        s_2,
        contribution: PlayerContribution {
            s_term: 0.5 * (s_2 - d as f64 * s_1),
            residual_diff: delta_3,
        },
    })
}

/// Synchronous-round aggregator: collects one contribution per player and
/// broadcasts the ordered sums only once every player has reported.
#[derive(Debug, Clone)]
pub struct AggregatorBus {
    inbox: Vec<Option<PlayerContribution>>,
}

impl AggregatorBus {
    pub fn new(players: usize) -> Self {
        Self {
            inbox: vec![None; players],
        }
    }

    pub fn submit(
        &mut self,
        player: usize,
        contribution: PlayerContribution,
    ) -> Result<(), ZoError> {
        if self.inbox[player].is_some() {
            return Err(ZoError::DuplicateContribution { player });
        }
        self.inbox[player] = Some(contribution);
        Ok(())
    }

    /// (S, D) by player-index-ordered summation, so the result does not
    /// depend on submission order.
    pub fn broadcast(&self) -> Result<(f64, f64), ZoError> {
        let mut s = 0.0;
        let mut d = 0.0;
        for (player, slot) in self.inbox.iter().enumerate() {
            let c = slot.ok_or(ZoError::MissingContribution { player })?;
            s += c.s_term;
            d += c.residual_diff;
        }
        Ok((s, d))
    }
}

/// Sums the per-player contributions into the broadcast pair (S, D).
pub fn aggregate(bus: &AggregatorBus) -> Result<(f64, f64), ZoError> {
    bus.broadcast()
}

/// Player i's gradient estimates from the broadcast and her local round:
/// ζ_{x^i} = S·ξ_x^i + D·η^i and ζ_{λ^i} = ½(S_2 − d·S_1)·ξ_λ^i.
#[allow(clippy::too_many_arguments)]
pub fn estimate(
    s: f64,
    d_sum: f64,
    s_1: f64,
    s_2: f64,
    xi_x_i: &[f64],
    eta_i: &[f64],
    xi_lambda_i: &[f64],
    d: usize,
) -> (DenseVector, DenseVector) {
    let zeta_x = xi_x_i
        .iter()
        .zip(eta_i)
        .map(|(xi, et)| s * xi + d_sum * et)
        .collect();
    let own_term = 0.5 * (s_2 - d as f64 * s_1);
    let zeta_lambda = xi_lambda_i.iter().map(|xi| own_term * xi).collect();
    (
        DenseVector::from_raw(zeta_x),
        DenseVector::from_raw(zeta_lambda),
    )
}

/// Everything sampled and computed in one synchronous round.
#[derive(Debug, Clone)]
pub struct EstimatorRound {
    pub xi_x: DenseVector,
    pub xi_lambda: DenseVector,
    pub eta: DenseVector,
    pub players: Vec<PlayerRound>,
    pub s: f64,
    pub d_sum: f64,
    /// Stacked ζ_{x^i} blocks (length nd).
    pub zeta_x: DenseVector,
    /// Stacked ζ_{λ^i} blocks (length m).
    pub zeta_lambda: DenseVector,
}

/// Runs one full estimator round at (x, λ) without updating the iterate.
/// Gaussian draws come from child streams keyed by (seed, round_tag,
/// player, role).
#[allow(clippy::too_many_arguments)]
pub fn run_estimator_round<O: PlayerOracle>(
    oracles: &[O],
    d: usize,
    lambda_offsets: &[usize],
    x: &[f64],
    lambda: &[f64],
    sigma: f64,
    delta: f64,
    root: &RngStream,
    round_tag: u64,
) -> Result<EstimatorRound, ZoError> {
    let n = oracles.len();
    let nd = n * d;
    let m = lambda_offsets[n];
    debug_assert_eq!(x.len(), nd);
    debug_assert_eq!(lambda.len(), m);

    let mut xi_x = vec![0.0; nd];
    let mut xi_lambda = vec![0.0; m];
    let mut eta = vec![0.0; nd];
    for (i, oracle) in oracles.iter().enumerate() {
        let m_i = oracle.constraint_count();
        let mut sx = root.child(&[round_tag, i as u64, ROLE_XI_X]);
        let mut sl = root.child(&[round_tag, i as u64, ROLE_XI_LAMBDA]);
        let mut se = root.child(&[round_tag, i as u64, ROLE_ETA]);
        for c in 0..d {
            xi_x[i * d + c] = sx.std_normal();
            eta[i * d + c] = se.std_normal();
        }
        for c in 0..m_i {
            xi_lambda[lambda_offsets[i] + c] = sl.std_normal();
        }
    }

    let points = build_query_points(x, sigma, delta, &xi_x, &eta);

    let mut players = Vec::with_capacity(n);
    let mut bus = AggregatorBus::new(n);
    for (i, oracle) in oracles.iter().enumerate() {
        let lam_i = &lambda[lambda_offsets[i]..lambda_offsets[i + 1]];
        let xi_l_i = &xi_lambda[lambda_offsets[i]..lambda_offsets[i + 1]];
        let eta_i = &eta[i * d..(i + 1) * d];
        let round = player_round(oracle, lam_i, &points, xi_l_i, eta_i, sigma, delta, d).map_err(
            |err| match err {
                ZoError::NonFiniteSample => ZoError::PlayerFault {
                    player: i,
                    iteration: round_tag,
                },
                other => other,
            },
        )?;
        bus.submit(i, round.contribution)?;
        players.push(round);
    }
    let (s, d_sum) = aggregate(&bus)?;

    let mut zeta_x = vec![0.0; nd];
    let mut zeta_lambda = vec![0.0; m];
    for i in 0..n {
        let (zx, zl) = estimate(
            s,
            d_sum,
            players[i].s_1,
            players[i].s_2,
            &xi_x[i * d..(i + 1) * d],
            &eta[i * d..(i + 1) * d],
            &xi_lambda[lambda_offsets[i]..lambda_offsets[i + 1]],
            d,
        );
        zeta_x[i * d..(i + 1) * d].copy_from_slice(&zx);
        zeta_lambda[lambda_offsets[i]..lambda_offsets[i + 1]].copy_from_slice(&zl);
    }

    Ok(EstimatorRound {
        xi_x: DenseVector::from_raw(xi_x),
        xi_lambda: DenseVector::from_raw(xi_lambda),
        eta: DenseVector::from_raw(eta),
        players,
        s,
        d_sum,
        zeta_x: DenseVector::from_raw(zeta_x),
        zeta_lambda: DenseVector::from_raw(zeta_lambda),
    })
}

#[derive(Debug, Clone)]
pub struct ZeroOrderRun {
    pub z: PrimalDual,
    pub trace: Trace,
}

/// Zero-order solve on a validated game; the players see only their value
/// oracles.
pub fn solve_zero_order(
    game: &QuadraticGame,
    sys: &KktSystem,
    z0: &PrimalDual,
    cfg: &ZoConfig,
    opts: &TraceOptions,
) -> Result<ZeroOrderRun, ZoError> {
    let oracles = game.oracles();
    solve_zero_order_with_oracles(&oracles, sys, z0, cfg, opts)
}

/// Generic zero-order solve over any value-only oracles. `sys` is used by
/// the coordinator only for the trace's gap column and the (x, λ) layout.
pub fn solve_zero_order_with_oracles<O: PlayerOracle>(
    oracles: &[O],
    sys: &KktSystem,
    z0: &PrimalDual,
    cfg: &ZoConfig,
    opts: &TraceOptions,
) -> Result<ZeroOrderRun, ZoError> {
    let n = oracles.len();
    let d = sys.action_dim();
    let nd = sys.primal_dim();
    let m = sys.dual_dim();
    if n != sys.player_count() {
        return Err(ZoError::InvalidConfig(format!(
            "{n} oracles for a {}-player system",
            sys.player_count()
        )));
    }
    let lambda_offsets: Vec<usize> = sys.lambda_offsets().to_vec();
    for (i, oracle) in oracles.iter().enumerate() {
        let expect = lambda_offsets[i + 1] - lambda_offsets[i];
        if oracle.constraint_count() != expect {
            return Err(ZoError::InvalidConfig(format!(
                "player {i}: oracle reports {} constraints, system expects {expect}",
                oracle.constraint_count()
            )));
        }
    }
    cfg.validate(nd + m)?;
    if z0.joint().len() != nd + m {
        return Err(ZoError::InvalidConfig(format!(
            "initial point has dimension {}, system expects {}",
            z0.joint().len(),
            nd + m
        )));
    }

    let root = RngStream::new(cfg.seed);
    let mut z = z0.clone();
    let mut trace = Trace::default();

    for t in 1..=cfg.max_iters {
        let (x, lambda) = z.joint().split_at(nd);
        let round = run_estimator_round(
            oracles,
            d,
            &lambda_offsets,
            x,
            lambda,
            cfg.sigma,
            cfg.delta,
            &root,
            t,
        )?;

        let joint = z.joint_mut();
        for (c, zeta) in round.zeta_x.iter().enumerate() {
            joint[c] -= cfg.schedule.gamma(t, c) * zeta;
        }
        for (c, zeta) in round.zeta_lambda.iter().enumerate() {
            joint[nd + c] -= cfg.schedule.gamma(t, nd + c) * zeta;
        }
        if !z.is_finite() {
            return Err(ZoError::Divergence { iteration: t });
        }

        if opts.should_record(t, cfg.max_iters) {
            let f = sys.gap(&z)?;
            if !f.is_finite() {
                return Err(ZoError::Divergence { iteration: t });
            }
            trace.rows.push(TraceRow {
                t,
                gamma_ref: cfg.schedule.gamma_ref(t),
                f,
                x_dist: opts.x_dist(z.x()),
                lambda_norm: crate::numerics::norm(z.lambda()),
            });
        }
    }
    Ok(ZeroOrderRun { z, trace })
}
