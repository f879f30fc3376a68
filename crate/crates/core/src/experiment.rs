//! Multi-seed experiment dispatch and the summary statistics reported by
//! the harness: per-seed traces, gap quantiles, and the log–log rate slope
//! over a window of iterations.

use crate::game::QuadraticGame;
use crate::kkt::{KktSystem, PrimalDual};
use crate::parallel::{indexed_map, Parallelism};
use crate::trace::{Trace, TraceOptions};
use crate::zero_order::{solve_zero_order, ZeroOrderRun, ZoConfig, ZoError};

/// Runs one independent zero-order solve per seed. Each worker owns its
/// solver instance; results come back in seed order regardless of the
/// execution mode.
pub fn run_zero_order_seeds(
    game: &QuadraticGame,
    sys: &KktSystem,
    z0: &PrimalDual,
    base: &ZoConfig,
    seeds: &[u64],
    opts: &TraceOptions,
    par: Parallelism,
) -> Vec<(u64, Result<ZeroOrderRun, ZoError>)> {
    indexed_map(par, seeds.len(), |idx| {
        let seed = seeds[idx];
        let cfg = ZoConfig {
            seed,
            ..base.clone()
        };
        (seed, solve_zero_order(game, sys, z0, &cfg, opts))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapStats {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

/// Median/min/max of a sample; the median of an even count is the mean of
/// the two central order statistics.
pub fn gap_stats(values: &[f64]) -> Option<GapStats> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    Some(GapStats {
        median,
        min: sorted[0],
        max: *sorted.last().unwrap(),
    })
}

pub fn median(values: &[f64]) -> Option<f64> {
    gap_stats(values).map(|s| s.median)
}

/// Least-squares slope of ln(y) against ln(x); points with non-positive
/// coordinates are skipped.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in &logs {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    (den > 0.0).then(|| num / den)
}

/// Mean gap per iteration across traces, restricted to the window
/// [t_lo, t_hi]. Iteration indices are taken from the first trace; every
/// trace must contain the same recorded rows.
pub fn mean_gap_curve(traces: &[&Trace], t_lo: u64, t_hi: u64) -> Vec<(f64, f64)> {
    let Some(first) = traces.first() else {
        return Vec::new();
    };
    first
        .rows
        .iter()
        .filter(|row| row.t >= t_lo && row.t <= t_hi)
        .map(|row| {
            let mean = traces
                .iter()
                .map(|tr| tr.f_at(row.t).expect("aligned traces"))
                .sum::<f64>()
                / traces.len() as f64;
            (row.t as f64, mean)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kkt::assemble;
    use crate::trace::TraceRow;
    use crate::zero_order::StepSchedule;

    #[test]
    fn stats_of_small_samples() {
        let s = gap_stats(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((s.median, s.min, s.max), (2.0, 1.0, 3.0));
        let s = gap_stats(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.median, 2.5);
        assert!(gap_stats(&[]).is_none());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..50).map(|t| (t as f64, 3.0 / t as f64)).collect();
        let slope = log_log_slope(&pts).unwrap();
        assert!((slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_curve_averages_traces() {
        let mk = |scale: f64| Trace {
            rows: (1..=5)
                .map(|t| TraceRow {
                    t,
                    gamma_ref: 0.0,
                    f: scale * t as f64,
                    x_dist: None,
                    lambda_norm: 0.0,
                })
                .collect(),
        };
        let a = mk(1.0);
        let b = mk(3.0);
        let curve = mean_gap_curve(&[&a, &b], 2, 4);
        assert_eq!(curve, vec![(2.0, 4.0), (3.0, 6.0), (4.0, 8.0)]);
    }

    #[test]
    fn seed_dispatch_is_order_stable_across_modes() {
        let game =
            QuadraticGame::from_json_str(include_str!("../../../fixtures/well_conditioned.json"))
                .unwrap();
        let sys = assemble(&game).unwrap();
        let cfg = ZoConfig {
            sigma: 0.05,
            delta: 0.05,
            schedule: StepSchedule::Global { g: 0.5, t0: 50.0 },
            max_iters: 300,
            seed: 0,
        };
        let seeds = [5u64, 6, 7, 8];
        let opts = TraceOptions::every(50);
        let seq = run_zero_order_seeds(
            &game,
            &sys,
            &sys.zeros(),
            &cfg,
            &seeds,
            &opts,
            Parallelism::Sequential,
        );
        let par = run_zero_order_seeds(
            &game,
            &sys,
            &sys.zeros(),
            &cfg,
            &seeds,
            &opts,
            Parallelism::default(),
        );
        for ((s1, r1), (s2, r2)) in seq.iter().zip(&par) {
            assert_eq!(s1, s2);
            let (t1, t2) = (r1.as_ref().unwrap(), r2.as_ref().unwrap());
            assert_eq!(t1.trace, t2.trace);
        }
    }
}
