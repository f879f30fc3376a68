//! Independent oracles and statistical checks that can run before and
//! alongside the solvers: finite-difference gradient validation,
//! Monte-Carlo estimator audits, the Gaussian moment-identity audit, and
//! the brute-force least-squares solution oracle.

use serde::Serialize;

use crate::game::QuadraticGame;
use crate::kkt::{KktError, KktSystem, PrimalDual};
use crate::numerics::{
    gaussian_identity_check, min_norm_least_squares, DenseVector, NumericsError, RngStream,
};
use crate::parallel::{indexed_map, Parallelism};
use crate::zero_order::{run_estimator_round, ZoError};

const AUDIT_CHUNK: usize = 1024;

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckNote {
    pub label: String,
    pub value: f64,
}

/// Uniform result shape for every audit; the aggregate flag is true iff
/// every item passed.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub items: Vec<CheckItem>,
    /// Informational measurements that are reported but not gated.
    pub notes: Vec<CheckNote>,
}

impl CheckReport {
    fn new(name: impl Into<String>, items: Vec<CheckItem>, notes: Vec<CheckNote>) -> Self {
        let pass = items.iter().all(|i| i.pass);
        Self {
            name: name.into(),
            pass,
            items,
            notes,
        }
    }

    pub fn violations(&self) -> usize {
        self.items.iter().filter(|i| !i.pass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{}: {} ({} items, {} failing)",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.items.len(),
            self.violations()
        )?;
        for item in &self.items {
            if !item.pass {
                writeln!(
                    f,
                    "  FAIL {}: observed {:.6e}, expected {:.6e}, tolerance {:.3e}",
                    item.label, item.observed, item.expected, item.tolerance
                )?;
            }
        }
        for note in &self.notes {
            writeln!(f, "  note {} = {:.6e}", note.label, note.value)?;
        }
        Ok(())
    }
}

/// Central finite differences of the gap against the exact gradient at
/// random points. The gap is quadratic, so central differences are exact
/// up to roundoff; the relative threshold is 1e-6.
pub fn fd_gradient_check(
    sys: &KktSystem,
    points: usize,
    h: f64,
    rng: &mut RngStream,
) -> Result<CheckReport, KktError> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let dim = sys.joint_dim();
    let mut items = Vec::with_capacity(points);
    for p in 0..points {
        let joint: Vec<f64> = (0..dim).map(|_| 2.0 * rng.std_normal()).collect();
        let z = PrimalDual::from_joint(DenseVector::from(joint.clone()), sys.primal_dim());
        let grad = sys.gap_gradient(&z)?;
        let mut worst = 0.0f64;
        for c in 0..dim {
            let mut zp = joint.clone();
            let mut zm = joint.clone();
            zp[c] += h;
            zm[c] -= h;
            let fp = sys.gap(&PrimalDual::from_joint(zp.into(), sys.primal_dim()))?;
            let fm = sys.gap(&PrimalDual::from_joint(zm.into(), sys.primal_dim()))?;
            let fd = (fp - fm) / (2.0 * h);
            let rel = (fd - grad[c]).abs() / (1.0 + grad[c].abs());
            worst = worst.max(rel);
        }
        items.push(CheckItem {
            label: format!("point{p}"),
            observed: worst,
            expected: 0.0,
            tolerance: 1e-6,
            pass: worst <= 1e-6,
        });
    }
    Ok(CheckReport::new("fd_gradient_check", items, Vec::new()))
}

struct AuditAccum {
    sums: Vec<f64>,
    sq_sums: Vec<f64>,
    /// Per-player running Σ‖ζ_{x^i}‖² and Σ‖ζ_{λ^i}‖².
    x_norm_sums: Vec<f64>,
    lambda_norm_sums: Vec<f64>,
}

/// Monte-Carlo mean of the zero-order estimates ζ at a fixed point against
/// the exact gradient, component-wise with 4·stderr bands; per-player
/// second moments are reported as notes for monitoring.
#[allow(clippy::too_many_arguments)]
pub fn estimator_audit(
    game: &QuadraticGame,
    sys: &KktSystem,
    z: &PrimalDual,
    sigma: f64,
    delta: f64,
    seed: u64,
    rounds: usize,
    par: Parallelism,
) -> Result<CheckReport, ZoError> {
    let oracles = game.oracles();
    let d = sys.action_dim();
    let nd = sys.primal_dim();
    let m = sys.dual_dim();
    let dim = nd + m;
    let n = sys.player_count();
    let offsets: Vec<usize> = sys.lambda_offsets().to_vec();
    let root = RngStream::new(seed);
    let (x, lambda) = z.joint().split_at(nd);

    let chunks = rounds.div_ceil(AUDIT_CHUNK);
    let partials: Vec<Result<AuditAccum, ZoError>> = indexed_map(par, chunks, |chunk| {
        let lo = chunk * AUDIT_CHUNK;
        let hi = ((chunk + 1) * AUDIT_CHUNK).min(rounds);
        let mut acc = AuditAccum {
            sums: vec![0.0; dim],
            sq_sums: vec![0.0; dim],
            x_norm_sums: vec![0.0; n],
            lambda_norm_sums: vec![0.0; n],
        };
        for round_idx in lo..hi {
            let round = run_estimator_round(
                &oracles,
                d,
                &offsets,
                x,
                lambda,
                sigma,
                delta,
                &root,
                round_idx as u64,
            )?;
            for c in 0..nd {
                let v = round.zeta_x[c];
                acc.sums[c] += v;
                acc.sq_sums[c] += v * v;
            }
            for c in 0..m {
                let v = round.zeta_lambda[c];
                acc.sums[nd + c] += v;
                acc.sq_sums[nd + c] += v * v;
            }
            for i in 0..n {
                acc.x_norm_sums[i] += round.zeta_x[i * d..(i + 1) * d]
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>();
                acc.lambda_norm_sums[i] += round.zeta_lambda[offsets[i]..offsets[i + 1]]
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>();
            }
        }
        Ok(acc)
    });

    let mut sums = vec![0.0; dim];
    let mut sq_sums = vec![0.0; dim];
    let mut x_norm_sums = vec![0.0; n];
    let mut lambda_norm_sums = vec![0.0; n];
    for partial in partials {
        let acc = partial?;
        for c in 0..dim {
            sums[c] += acc.sums[c];
            sq_sums[c] += acc.sq_sums[c];
        }
        for i in 0..n {
            x_norm_sums[i] += acc.x_norm_sums[i];
            lambda_norm_sums[i] += acc.lambda_norm_sums[i];
        }
    }

    let grad = sys.gap_gradient(z)?;
    let nf = rounds as f64;
    let mut items = Vec::with_capacity(dim);
    for c in 0..dim {
        let mean = sums[c] / nf;
        let var = (sq_sums[c] / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        let stderr = (var / nf).sqrt();
        let tolerance = 4.0 * stderr + 1e-12;
        let label = if c < nd {
            format!("zeta_x[{c}]")
        } else {
            format!("zeta_lambda[{}]", c - nd)
        };
        items.push(CheckItem {
            label,
            observed: mean,
            expected: grad[c],
            tolerance,
            pass: (mean - grad[c]).abs() <= tolerance,
        });
    }
    let mut notes = Vec::with_capacity(2 * n);
    for i in 0..n {
        notes.push(CheckNote {
            label: format!("E||zeta_x^{i}||^2"),
            value: x_norm_sums[i] / nf,
        });
        notes.push(CheckNote {
            label: format!("E||zeta_lambda^{i}||^2"),
            value: lambda_norm_sums[i] / nf,
        });
    }
    Ok(CheckReport::new("estimator_audit", items, notes))
}

/// Runs the Gaussian moment-identity check over a grid of (n, d) block
/// layouts, every block index j, and random (a, b) pairs; all four closed
/// forms must sit within 5·stderr.
pub fn identity_audit(
    dims: &[(usize, usize)],
    samples: usize,
    rng: &RngStream,
    par: Parallelism,
) -> Result<CheckReport, NumericsError> {
    let mut items = Vec::new();
    for &(n, d) in dims {
        for j in 0..n {
            let mut vec_rng = rng.child(&[0xA0, n as u64, d as u64, j as u64]);
            let a: Vec<f64> = (0..n * d).map(|_| vec_rng.std_normal()).collect();
            let b: Vec<f64> = (0..n * d).map(|_| vec_rng.std_normal()).collect();
            let sample_rng = rng.child(&[0xB0, n as u64, d as u64, j as u64]);
            let report = gaussian_identity_check(&a, &b, j, d, n, samples, &sample_rng, par)?;
            for est in report.items {
                items.push(CheckItem {
                    label: format!("n{n}_d{d}_j{j}_{}", est.label),
                    observed: est.estimate,
                    expected: est.closed_form,
                    tolerance: 5.0 * est.std_error + 1e-12,
                    pass: est.within(5.0),
                });
            }
        }
    }
    Ok(CheckReport::new("identity_audit", items, Vec::new()))
}

/// Default grid for [`identity_audit`].
pub fn default_identity_grid() -> Vec<(usize, usize)> {
    vec![(1, 1), (2, 1), (2, 2), (3, 2)]
}

/// Brute-force solution oracle: the min-norm least-squares point of
/// Gz = −e, its gap, and the kernel dimension of G. The instance has a
/// GNE iff the residual gap is (numerically) zero.
#[derive(Debug, Clone)]
pub struct SolutionOracleReport {
    pub z_bar: PrimalDual,
    pub residual: f64,
    pub kernel_dim: usize,
    /// residual ≤ 1e-10·(1 + ‖e‖²)
    pub has_gne: bool,
    pub threshold: f64,
}

pub fn solution_oracle(sys: &KktSystem) -> Result<SolutionOracleReport, KktError> {
    let neg_e: Vec<f64> = sys.e().iter().map(|v| -v).collect();
    let z_bar = PrimalDual::from_joint(min_norm_least_squares(sys.g(), &neg_e)?, sys.primal_dim());
    let residual = sys.gap(&z_bar)?;
    let threshold = 1e-10 * (1.0 + sys.e().norm_sq());
    Ok(SolutionOracleReport {
        residual,
        kernel_dim: sys.kernel_dim(),
        has_gne: residual <= threshold,
        threshold,
        z_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kkt::assemble;

    fn load(fixture: &str) -> (QuadraticGame, KktSystem) {
        let game = QuadraticGame::from_json_str(fixture).unwrap();
        let sys = assemble(&game).unwrap();
        (game, sys)
    }

    fn paper() -> (QuadraticGame, KktSystem) {
        load(include_str!("../../../fixtures/paper_example.json"))
    }

    #[test]
    fn fd_check_passes_on_paper_fixture() {
        let (_, sys) = paper();
        let mut rng = RngStream::new(3);
        let report = fd_gradient_check(&sys, 10, 1e-4, &mut rng).unwrap();
        assert!(report.pass, "{report}");
        // Quadratic exactness: errors are roundoff-dominated.
        assert!(report.items.iter().all(|i| i.observed < 1e-7));
    }

    #[test]
    fn fd_check_near_minimizer_uses_absolute_scale() {
        let (_, sys) = load(include_str!("../../../fixtures/single_player.json"));
        // At x = 0 the scalar case has fd value -8 up to O(eps/h).
        let z = sys.zeros();
        let grad = sys.gap_gradient(&z).unwrap();
        assert_eq!(grad[0], -8.0);
        let mut rng = RngStream::new(4);
        let report = fd_gradient_check(&sys, 5, 1e-4, &mut rng).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn estimator_audit_centered_at_solution() {
        let (game, sys) = paper();
        let z = PrimalDual::from_parts(&[1.0, 2.0, 3.0, 4.0], &[0.0, 0.0, 0.0]);
        let report = estimator_audit(
            &game,
            &sys,
            &z,
            0.05,
            0.05,
            101,
            20_000,
            Parallelism::default(),
        )
        .unwrap();
        assert!(report.pass, "{report}");
        // The gradient vanishes here but the estimator variance does not;
        // second moments are reported for monitoring.
        assert!(report.notes.iter().any(|n| n.value > 1.0));
    }

    #[test]
    fn estimator_audit_matches_exact_gradient_at_origin() {
        let (game, sys) = paper();
        let z = sys.zeros();
        let report = estimator_audit(
            &game,
            &sys,
            &z,
            0.05,
            0.05,
            102,
            40_000,
            Parallelism::default(),
        )
        .unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn estimator_audit_parallel_matches_sequential() {
        let (game, sys) = paper();
        let z = sys.zeros();
        let a = estimator_audit(
            &game,
            &sys,
            &z,
            0.05,
            0.05,
            7,
            3_000,
            Parallelism::Sequential,
        )
        .unwrap();
        let b = estimator_audit(
            &game,
            &sys,
            &z,
            0.05,
            0.05,
            7,
            3_000,
            Parallelism::default(),
        )
        .unwrap();
        for (x, y) in a.items.iter().zip(&b.items) {
            assert_eq!(x.observed.to_bits(), y.observed.to_bits());
        }
    }

    #[test]
    fn halving_delta_changes_second_moments_descriptively() {
        let (game, sys) = paper();
        let z = sys.zeros();
        let wide = estimator_audit(
            &game,
            &sys,
            &z,
            0.05,
            0.2,
            11,
            20_000,
            Parallelism::default(),
        )
        .unwrap();
        let narrow = estimator_audit(
            &game,
            &sys,
            &z,
            0.05,
            0.1,
            11,
            20_000,
            Parallelism::default(),
        )
        .unwrap();
        // Reported, not asserted as a bound: the delta-dependent variance
        // part shrinks with delta.
        let sum = |r: &CheckReport| r.notes.iter().map(|n| n.value).sum::<f64>();
        assert!(sum(&narrow) < sum(&wide));
    }

    #[test]
    fn identity_audit_passes_small_grid() {
        let rng = RngStream::new(55);
        let report =
            identity_audit(&[(1, 1), (2, 2)], 150_000, &rng, Parallelism::default()).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn solution_oracle_recovers_paper_equilibrium() {
        let (_, sys) = paper();
        let report = solution_oracle(&sys).unwrap();
        assert!(report.has_gne);
        assert_eq!(report.kernel_dim, 0);
        assert!(report.residual < 1e-20);
        let expect = [1.0, 2.0, 3.0, 4.0];
        for (got, want) in report.z_bar.x().iter().zip(&expect) {
            assert!((got - want).abs() < 1e-9, "{:?}", report.z_bar.x());
        }
        for lam in report.z_bar.lambda() {
            assert!(lam.abs() < 1e-9);
        }
    }

    #[test]
    fn solution_oracle_flags_infeasible_instance() {
        let (_, sys) = load(include_str!("../../../fixtures/infeasible.json"));
        let report = solution_oracle(&sys).unwrap();
        assert!(!report.has_gne);
        // The contradictory pair x = 0, x = 1 leaves residual 1/2.
        assert!((report.residual - 0.5).abs() < 1e-12);
    }

    #[test]
    fn solution_oracle_unconstrained_scalar() {
        let (_, sys) = load(include_str!("../../../fixtures/single_player.json"));
        let report = solution_oracle(&sys).unwrap();
        assert!(report.has_gne);
        assert!((report.z_bar.joint()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solution_oracle_handles_dual_kernel() {
        let (_, sys) = load(include_str!("../../../fixtures/three_player.json"));
        let report = solution_oracle(&sys).unwrap();
        assert!(report.has_gne);
        assert_eq!(report.kernel_dim, 1);
        let expect = [1.0, -1.0, 2.0];
        for (got, want) in report.z_bar.x().iter().zip(&expect) {
            assert!((got - want).abs() < 1e-9);
        }
        let cert = sys
            .certify_gne(&report.z_bar, sys.default_certificate_tolerance())
            .unwrap();
        assert!(cert.accepted);
    }

    #[test]
    fn check_report_json_has_stable_fields() {
        let report = CheckReport::new(
            "demo",
            vec![CheckItem {
                label: "x".into(),
                observed: 1.0,
                expected: 1.0,
                tolerance: 0.1,
                pass: true,
            }],
            vec![CheckNote {
                label: "m".into(),
                value: 2.0,
            }],
        );
        let json = report.to_json();
        for key in [
            "\"name\"",
            "\"pass\"",
            "\"items\"",
            "\"notes\"",
            "\"observed\"",
            "\"expected\"",
            "\"tolerance\"",
            "\"label\"",
            "\"value\"",
        ] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
    }
}
