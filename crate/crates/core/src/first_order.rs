//! Exact-gradient descent baseline on the gap function.
//!
//! F is L_F-smooth and satisfies the PL inequality with constant μ_F, so
//! constant-step descent with step ≤ 1/L_F contracts geometrically:
//! F_{t+1} ≤ (1 − μ_F/L_F)·F_t.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kkt::{KktError, KktSystem, PrimalDual};
use crate::trace::{Trace, TraceOptions, TraceRow};

#[derive(Debug, Error)]
pub enum FirstOrderError {
    #[error("step {step} outside (0, 1/L_F] = (0, {max}]")]
    InvalidStep { step: f64, max: f64 },
    #[error("stop_gap must be positive, got {0}")]
    InvalidStopGap(f64),
    #[error("divergence at iteration {iteration}: non-finite gap")]
    Divergence { iteration: u64 },
    #[error(transparent)]
    Kkt(#[from] KktError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoConfig {
    /// Constant step size; `None` selects the classical PL-smooth choice
    /// 1/L_F.
    #[serde(default)]
    pub step: Option<f64>,
    pub max_iters: u64,
    pub stop_gap: f64,
}

impl Default for FoConfig {
    fn default() -> Self {
        Self {
            step: None,
            max_iters: 1_000_000,
            stop_gap: 1e-12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FirstOrderRun {
    pub z: PrimalDual,
    pub trace: Trace,
    /// Iterations actually performed.
    pub iterations: u64,
    /// Whether stop_gap was reached within max_iters.
    pub converged: bool,
}

/// Iterations needed to reach `stop_gap` from `f0` under the PL linear
/// rate with step 1/L_F: ⌈log(f0/stop_gap) / log(1/(1 − μ_F/L_F))⌉.
pub fn pl_iteration_bound(sys: &KktSystem, f0: f64, stop_gap: f64) -> u64 {
    if f0 <= stop_gap {
        return 0;
    }
    let rate = 1.0 - sys.mu_f() / sys.l_f();
    if rate <= 0.0 {
        return 1;
    }
    ((f0 / stop_gap).ln() / (1.0 / rate).ln()).ceil() as u64
}

/// Runs z_{t+1} = z_t − step·∇F(z_t) until gap ≤ stop_gap or max_iters.
pub fn solve_first_order(
    sys: &KktSystem,
    z0: &PrimalDual,
    cfg: &FoConfig,
    opts: &TraceOptions,
) -> Result<FirstOrderRun, FirstOrderError> {
    if cfg.stop_gap.is_nan() || cfg.stop_gap <= 0.0 {
        return Err(FirstOrderError::InvalidStopGap(cfg.stop_gap));
    }
    let max_step = 1.0 / sys.l_f();
    let step = cfg.step.unwrap_or(max_step);
    if step.is_nan() || step <= 0.0 || step > max_step * (1.0 + 1e-12) {
        return Err(FirstOrderError::InvalidStep {
            step,
            max: max_step,
        });
    }

    let mut z = z0.clone();
    let f0 = sys.gap(&z)?;
    if !f0.is_finite() {
        return Err(FirstOrderError::Divergence { iteration: 0 });
    }
    if f0 <= cfg.stop_gap {
        return Ok(FirstOrderRun {
            z,
            trace: Trace::default(),
            iterations: 0,
            converged: true,
        });
    }

    let mut trace = Trace::default();
    let mut converged = false;
    let mut iterations = 0;
    for t in 1..=cfg.max_iters {
        let grad = sys.gap_gradient(&z)?;
        for (zi, gi) in z.joint_mut().iter_mut().zip(grad.iter()) {
            *zi -= step * gi;
        }
        let f = sys.gap(&z)?;
        if !f.is_finite() {
            return Err(FirstOrderError::Divergence { iteration: t });
        }
        iterations = t;
        let done = f <= cfg.stop_gap;
        if opts.should_record(t, cfg.max_iters) || done {
            trace.rows.push(TraceRow {
                t,
                gamma_ref: step,
                f,
                x_dist: opts.x_dist(z.x()),
                lambda_norm: crate::numerics::norm(z.lambda()),
            });
        }
        if done {
            converged = true;
            break;
        }
    }
    Ok(FirstOrderRun {
        z,
        trace,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::QuadraticGame;
    use crate::kkt::assemble;

    fn scalar_sys() -> KktSystem {
        let game =
            QuadraticGame::from_json_str(include_str!("../../../fixtures/single_player.json"))
                .unwrap();
        assemble(&game).unwrap()
    }

    fn paper_sys() -> KktSystem {
        let game =
            QuadraticGame::from_json_str(include_str!("../../../fixtures/paper_example.json"))
                .unwrap();
        assemble(&game).unwrap()
    }

    #[test]
    fn scalar_quadratic_converges_in_one_step() {
        // G = (2), e = (-2): gradient at 0 is -8, step 1/L_F = 1/8, so the
        // first iterate is exactly the minimizer z = 1.
        let sys = scalar_sys();
        let run = solve_first_order(
            &sys,
            &sys.zeros(),
            &FoConfig::default(),
            &TraceOptions::default(),
        )
        .unwrap();
        assert_eq!(run.iterations, 1);
        assert!(run.converged);
        assert!((run.z.joint()[0] - 1.0).abs() < 1e-15);
        assert_eq!(run.trace.rows[0].f, 0.0);
    }

    #[test]
    fn paper_fixture_converges_within_pl_bound() {
        let sys = paper_sys();
        let cfg = FoConfig {
            step: None,
            max_iters: 2_000_000,
            stop_gap: 1e-12,
        };
        let f0 = sys.gap(&sys.zeros()).unwrap();
        assert_eq!(f0, 1851.25);
        let bound = pl_iteration_bound(&sys, f0, cfg.stop_gap);
        let run = solve_first_order(&sys, &sys.zeros(), &cfg, &TraceOptions::every(1000)).unwrap();
        assert!(run.converged);
        assert!(
            run.iterations <= bound,
            "took {} iterations, PL bound {bound}",
            run.iterations
        );
        let cert = sys.certify_gne(&run.z, 10.0 * cfg.stop_gap).unwrap();
        assert!(cert.accepted);
    }

    #[test]
    fn per_iteration_contraction_and_monotonicity() {
        let sys = paper_sys();
        let cfg = FoConfig {
            step: None,
            max_iters: 5_000,
            stop_gap: 1e-12,
        };
        let run = solve_first_order(&sys, &sys.zeros(), &cfg, &TraceOptions::default()).unwrap();
        let rate = 1.0 - sys.mu_f() / sys.l_f();
        let mut prev = sys.gap(&sys.zeros()).unwrap();
        for row in &run.trace.rows {
            let slack = 1e-12 * prev.max(1.0);
            assert!(
                row.f <= rate * prev + slack,
                "t = {}: F = {} vs bound {}",
                row.t,
                row.f,
                rate * prev
            );
            assert!(row.f <= prev + slack);
            prev = row.f;
        }
    }

    #[test]
    fn starting_at_minimizer_returns_immediately() {
        let sys = paper_sys();
        let z = PrimalDual::from_parts(&[1.0, 2.0, 3.0, 4.0], &[0.0, 0.0, 0.0]);
        let run =
            solve_first_order(&sys, &z, &FoConfig::default(), &TraceOptions::default()).unwrap();
        assert_eq!(run.iterations, 0);
        assert!(run.converged);
        assert!(run.trace.is_empty());
    }

    #[test]
    fn oversized_step_is_rejected() {
        let sys = scalar_sys();
        let cfg = FoConfig {
            step: Some(1.0),
            ..FoConfig::default()
        };
        let err =
            solve_first_order(&sys, &sys.zeros(), &cfg, &TraceOptions::default()).unwrap_err();
        assert!(matches!(err, FirstOrderError::InvalidStep { .. }));
    }

    #[test]
    fn overflowing_start_reports_divergence() {
        let sys = scalar_sys();
        let z = PrimalDual::from_parts(&[1e200], &[]);
        let err = solve_first_order(&sys, &z, &FoConfig::default(), &TraceOptions::default())
            .unwrap_err();
        assert!(matches!(err, FirstOrderError::Divergence { .. }));
    }
}
