//! Command-line harness: validate game files, inspect the KKT
//! reformulation, run the first-order and zero-order solvers with CSV
//! traces, and drive the verification audits.
//!
//! Exit codes: 0 success/pass, 1 validation or audit failure, 2 I/O or
//! parse error, 3 divergence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use gne_core::experiment::{gap_stats, run_zero_order_seeds};
use gne_core::first_order::{pl_iteration_bound, solve_first_order, FirstOrderError, FoConfig};
use gne_core::game::{pseudo_gradient_monotonicity, GameConfig, GameError, QuadraticGame};
use gne_core::kkt::{assemble, KktSystem, PrimalDual};
use gne_core::numerics::RngStream;
use gne_core::trace::TraceOptions;
use gne_core::verification::{
    default_identity_grid, estimator_audit, fd_gradient_check, identity_audit, solution_oracle,
};
use gne_core::zero_order::{StepSchedule, ZoConfig, ZoError};
use gne_core::Parallelism;

/// The bundled two-player example instance; `--game paper` resolves to it.
const PAPER_FIXTURE: &str = include_str!("../../../fixtures/paper_example.json");

/// Base seed when neither flags nor config supply one; overridable through
/// the GNE_SEED environment variable.
const SEED_ENV: &str = "GNE_SEED";

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gne",
    about = "Generalized Nash equilibria of quadratic games",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Check a game file for symmetry, convexity and dimension errors.
    Validate { game: String },
    /// Print the KKT reformulation constants and solvability diagnosis.
    Reformulate { game: String },
    /// Run a solver and write per-seed CSV traces.
    Solve(SolveArgs),
    /// Run one of the verification audits.
    Audit {
        #[command(subcommand)]
        kind: AuditCmd,
    },
}

#[derive(Args, Default)]
struct SolveArgs {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Game file path, or `paper` for the bundled fixture.
    #[arg(long)]
    game: Option<String>,
    /// `first-order` or `zero-order`.
    #[arg(long)]
    method: Option<String>,
    /// First-order constant step (defaults to 1/L_F).
    #[arg(long)]
    step: Option<f64>,
    /// First-order iteration cap.
    #[arg(long = "max-iters")]
    max_iters: Option<u64>,
    /// First-order stopping gap.
    #[arg(long = "stop-gap")]
    stop_gap: Option<f64>,
    /// Zero-order round count.
    #[arg(long = "T", visible_alias = "iters")]
    t: Option<u64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// `paper-example`, or `global` together with --g/--t0.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    /// Number of seeds: base, base+1, …, base+N-1.
    #[arg(long)]
    seeds: Option<u64>,
    /// Explicit comma-separated seed list (overrides --seeds).
    #[arg(long = "seed-list", value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// Base seed (default 0, or GNE_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Trace output path; multiple seeds get a `_s<seed>` suffix.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Record every k-th iteration (final row always included).
    #[arg(long = "trace-every")]
    trace_every: Option<u64>,
    /// Reference x for the trace's distance column, comma-separated.
    #[arg(long, value_delimiter = ',')]
    reference: Option<Vec<f64>>,
    /// Run seeds sequentially instead of on the worker pool.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Finite-difference check of the gap gradient.
    Fd {
        #[arg(long)]
        game: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo unbiasedness audit of the zero-order estimator.
    Estimator {
        #[arg(long)]
        game: String,
        /// `zero`, `solution`, or a comma-separated joint point [x, λ].
        #[arg(long, default_value = "zero")]
        point: String,
        #[arg(long, default_value_t = 200_000)]
        rounds: usize,
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo audit of the Gaussian block-projector identities.
    Identities {
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Grid of block layouts, e.g. `1x1,2x2,3x2`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Min-norm least-squares solution oracle and GNE-existence verdict.
    Oracle {
        #[arg(long)]
        game: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Game(GameError),
    Usage(String),
    Io(std::io::Error),
    Diverged(String),
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Game(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Diverged(msg) => write!(f, "{msg}"),
            CliError::Failed(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Game(GameError::Invalid(_)) => EXIT_FAIL,
            CliError::Game(_) | CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Diverged(_) => EXIT_DIVERGED,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::Game(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::Validate { game } => cmd_validate(&game),
        Cmd::Reformulate { game } => cmd_reformulate(&game),
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Audit { kind } => cmd_audit(kind),
    }
}

fn game_text(spec: &str) -> Result<String, CliError> {
    if spec == "paper" {
        return Ok(PAPER_FIXTURE.to_string());
    }
    Ok(std::fs::read_to_string(spec)?)
}

fn load_game(spec: &str) -> Result<(QuadraticGame, KktSystem), CliError> {
    let game = QuadraticGame::from_json_str(&game_text(spec)?)?;
    let sys = assemble(&game).map_err(|e| CliError::Failed(format!("assembly failed: {e}")))?;
    Ok((game, sys))
}

fn default_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(0)
}

fn cmd_validate(game: &str) -> Result<ExitCode, CliError> {
    let config = GameConfig::from_json_str(&game_text(game)?)?;
    let report = config.validate();
    if report.is_valid() {
        println!(
            "valid: {} players, action dim {}, {} constraints",
            config.n,
            config.d,
            config.players.iter().map(|p| p.a.len()).sum::<usize>()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid:");
        print!("{report}");
        Ok(ExitCode::from(EXIT_FAIL))
    }
}

fn cmd_reformulate(game: &str) -> Result<ExitCode, CliError> {
    let (game, sys) = load_game(game)?;
    println!(
        "players: {}  action dim: {}  primal dim: {}  duals: {}  G: {dim}x{dim}",
        game.player_count(),
        game.action_dim(),
        sys.primal_dim(),
        sys.dual_dim(),
        dim = sys.joint_dim(),
    );
    println!(
        "sigma_max: {:.12e}  sigma_min+: {:.12e}  kernel dim: {}",
        sys.sigma_max(),
        sys.sigma_min_positive(),
        sys.kernel_dim()
    );
    println!(
        "mu_F: {:.12e}  L_F: {:.12e}  condition L_F/mu_F: {:.6e}",
        sys.mu_f(),
        sys.l_f(),
        sys.l_f() / sys.mu_f()
    );
    let mono = pseudo_gradient_monotonicity(&game);
    println!(
        "pseudo-gradient: {} (lambda_min = {:.12e})",
        if mono.is_monotone {
            "monotone"
        } else {
            "non-monotone"
        },
        mono.lambda_min
    );
    let oracle = solution_oracle(&sys).map_err(|e| CliError::Failed(e.to_string()))?;
    if oracle.has_gne {
        println!(
            "solution oracle: GNE exists (residual {:.6e} <= {:.6e})",
            oracle.residual, oracle.threshold
        );
        println!("  x* = {:?}", oracle.z_bar.x());
    } else {
        println!(
            "solution oracle: no GNE (Assumption 2 fails; residual {:.6e} > {:.6e})",
            oracle.residual, oracle.threshold
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Run configuration document: top-level game, method, params, seeds,
/// trace. Flags override every field.
#[derive(Debug, Default, Deserialize)]
struct RunConfig {
    #[serde(default)]
    game: Option<String>,
    #[serde(default)]
    method: Option<String>,
    #[serde(default)]
    params: Option<serde_json::Value>,
    #[serde(default)]
    seeds: Option<Vec<u64>>,
    #[serde(default)]
    trace: Option<String>,
    #[serde(default)]
    trace_every: Option<u64>,
    #[serde(default)]
    reference: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ScheduleSpec {
    Named(String),
    Explicit(StepSchedule),
}

fn resolve_schedule(
    name: Option<&str>,
    g: Option<f64>,
    t0: Option<f64>,
    from_config: Option<&serde_json::Value>,
) -> Result<StepSchedule, CliError> {
    if let Some(name) = name {
        return match name {
            "paper-example" => Ok(StepSchedule::paper_example()),
            "global" => Ok(StepSchedule::Global {
                g: g.ok_or_else(|| CliError::Usage("--schedule global needs --g".into()))?,
                t0: t0.unwrap_or(0.0),
            }),
            other => Err(CliError::Usage(format!(
                "unknown schedule `{other}` (expected `paper-example` or `global`)"
            ))),
        };
    }
    if let Some(value) = from_config {
        let spec: ScheduleSpec = serde_json::from_value(value.clone())
            .map_err(|e| CliError::Usage(format!("bad schedule in config: {e}")))?;
        return match spec {
            ScheduleSpec::Named(name) if name == "paper-example" => {
                Ok(StepSchedule::paper_example())
            }
            ScheduleSpec::Named(other) => Err(CliError::Usage(format!(
                "unknown schedule `{other}` in config"
            ))),
            ScheduleSpec::Explicit(s) => Ok(s),
        };
    }
    Err(CliError::Usage(
        "zero-order solve needs --schedule (or a schedule in --config)".into(),
    ))
}

fn trace_path_for_seed(base: &Path, seed: u64, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into());
    let ext = base
        .extension()
        .map(|s| format!(".{}", s.to_string_lossy()))
        .unwrap_or_default();
    base.with_file_name(format!("{stem}_s{seed}{ext}"))
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, CliError> {
    let config: RunConfig = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| CliError::Usage(format!("bad run config: {e}")))?,
        None => RunConfig::default(),
    };
    let params = config.params.clone().unwrap_or(serde_json::Value::Null);
    let get_f64 = |key: &str| params.get(key).and_then(|v| v.as_f64());
    let get_u64 = |key: &str| params.get(key).and_then(|v| v.as_u64());

    let game_spec = args
        .game
        .clone()
        .or(config.game.clone())
        .ok_or_else(|| CliError::Usage("missing --game".into()))?;
    let method = args
        .method
        .clone()
        .or(config.method.clone())
        .ok_or_else(|| CliError::Usage("missing --method (first-order | zero-order)".into()))?;
    let (game, sys) = load_game(&game_spec)?;

    let trace_base = args
        .trace
        .clone()
        .or_else(|| config.trace.clone().map(PathBuf::from));
    let mut opts = TraceOptions::every(args.trace_every.or(config.trace_every).unwrap_or(1));
    if let Some(reference) = args.reference.clone().or_else(|| config.reference.clone()) {
        if reference.len() != sys.primal_dim() {
            return Err(CliError::Usage(format!(
                "reference has {} entries, expected {}",
                reference.len(),
                sys.primal_dim()
            )));
        }
        opts = opts.with_reference(reference);
    }

    match method.as_str() {
        "first-order" => {
            let cfg = FoConfig {
                step: args.step.or_else(|| get_f64("step")),
                max_iters: args
                    .max_iters
                    .or_else(|| get_u64("max_iters"))
                    .unwrap_or(2_000_000),
                stop_gap: args
                    .stop_gap
                    .or_else(|| get_f64("stop_gap"))
                    .unwrap_or(1e-12),
            };
            let z0 = sys.zeros();
            let f0 = sys.gap(&z0).map_err(|e| CliError::Failed(e.to_string()))?;
            let run = solve_first_order(&sys, &z0, &cfg, &opts).map_err(|e| match e {
                FirstOrderError::Divergence { .. } => CliError::Diverged(e.to_string()),
                other => CliError::Usage(other.to_string()),
            })?;
            let bound = pl_iteration_bound(&sys, f0, cfg.stop_gap);
            println!(
                "first-order: {} in {} iterations (PL bound {bound}), final gap {:.6e}",
                if run.converged {
                    "converged"
                } else {
                    "stopped"
                },
                run.iterations,
                run.trace.last_f().unwrap_or(f0),
            );
            if let Some(base) = trace_base {
                run.trace.write_csv(&base)?;
                println!("trace: {}", base.display());
            }
            Ok(if run.converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            })
        }
        "zero-order" => {
            let schedule = resolve_schedule(
                args.schedule.as_deref(),
                args.g.or_else(|| get_f64("g")),
                args.t0.or_else(|| get_f64("t0")),
                params.get("schedule"),
            )?;
            let base_cfg = ZoConfig {
                sigma: args.sigma.or_else(|| get_f64("sigma")).unwrap_or(0.05),
                delta: args.delta.or_else(|| get_f64("delta")).unwrap_or(0.05),
                schedule,
                max_iters: args.t.or_else(|| get_u64("max_iters")).unwrap_or(10_000),
                seed: 0,
            };
            let seeds: Vec<u64> = if let Some(list) = args.seed_list.clone() {
                list
            } else if let Some(count) = args.seeds {
                let base = default_seed(args.seed);
                (base..base + count).collect()
            } else if let Some(list) = config.seeds.clone() {
                list
            } else {
                vec![default_seed(args.seed)]
            };
            if seeds.is_empty() {
                return Err(CliError::Usage("empty seed list".into()));
            }

            let par = if args.sequential {
                Parallelism::Sequential
            } else {
                Parallelism::default()
            };
            let outcomes =
                run_zero_order_seeds(&game, &sys, &sys.zeros(), &base_cfg, &seeds, &opts, par);

            let mut final_gaps = Vec::new();
            let mut final_dists = Vec::new();
            let mut diverged = Vec::new();
            let multi = seeds.len() > 1;
            for (seed, outcome) in &outcomes {
                match outcome {
                    Ok(run) => {
                        if let Some(f) = run.trace.last_f() {
                            final_gaps.push(f);
                        }
                        if let Some(d) = run.trace.rows.last().and_then(|r| r.x_dist) {
                            final_dists.push(d);
                        }
                        if let Some(base) = &trace_base {
                            let path = trace_path_for_seed(base, *seed, multi);
                            run.trace.write_csv(&path)?;
                        }
                    }
                    Err(err) => {
                        eprintln!("seed {seed}: {err}");
                        diverged.push(*seed);
                    }
                }
            }
            println!(
                "zero-order: T = {}, sigma = {}, delta = {}, seeds = {}",
                base_cfg.max_iters,
                base_cfg.sigma,
                base_cfg.delta,
                seeds.len()
            );
            if let Some(stats) = gap_stats(&final_gaps) {
                println!(
                    "final gap: median {:.6e}  min {:.6e}  max {:.6e}",
                    stats.median, stats.min, stats.max
                );
            }
            if let Some(stats) = gap_stats(&final_dists) {
                println!(
                    "final ||x - x_ref||: median {:.6e}  min {:.6e}  max {:.6e}",
                    stats.median, stats.min, stats.max
                );
            }
            if let Some(base) = &trace_base {
                println!("traces: {}", base.display());
            }
            if !diverged.is_empty() {
                println!("diverged seeds: {diverged:?}");
                return Ok(ExitCode::from(EXIT_DIVERGED));
            }
            Ok(ExitCode::SUCCESS)
        }
        other => Err(CliError::Usage(format!(
            "unknown method `{other}` (expected first-order | zero-order)"
        ))),
    }
}

fn parse_grid(grid: &str) -> Result<Vec<(usize, usize)>, CliError> {
    grid.split(',')
        .map(|cell| {
            let (n, d) = cell
                .split_once('x')
                .ok_or_else(|| CliError::Usage(format!("bad grid cell `{cell}`, want NxD")))?;
            let n = n.trim().parse::<usize>();
            let d = d.trim().parse::<usize>();
            match (n, d) {
                (Ok(n), Ok(d)) if n >= 1 && d >= 1 => Ok((n, d)),
                _ => Err(CliError::Usage(format!("bad grid cell `{cell}`"))),
            }
        })
        .collect()
}

fn cmd_audit(kind: AuditCmd) -> Result<ExitCode, CliError> {
    let report = match kind {
        AuditCmd::Fd {
            game,
            points,
            h,
            seed,
            json,
        } => {
            let (_, sys) = load_game(&game)?;
            let mut rng = RngStream::new(default_seed(seed));
            let report = fd_gradient_check(&sys, points, h, &mut rng)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            print_report(&report, json);
            report.pass
        }
        AuditCmd::Estimator {
            game,
            point,
            rounds,
            sigma,
            delta,
            seed,
            json,
        } => {
            let (game, sys) = load_game(&game)?;
            let z = match point.as_str() {
                "zero" => sys.zeros(),
                "solution" => {
                    solution_oracle(&sys)
                        .map_err(|e| CliError::Failed(e.to_string()))?
                        .z_bar
                }
                list => {
                    let values: Result<Vec<f64>, _> =
                        list.split(',').map(|v| v.trim().parse::<f64>()).collect();
                    let values =
                        values.map_err(|_| CliError::Usage(format!("bad --point `{list}`")))?;
                    if values.len() != sys.joint_dim() {
                        return Err(CliError::Usage(format!(
                            "--point has {} entries, expected {}",
                            values.len(),
                            sys.joint_dim()
                        )));
                    }
                    PrimalDual::from_joint(values.into(), sys.primal_dim())
                }
            };
            let report = estimator_audit(
                &game,
                &sys,
                &z,
                sigma,
                delta,
                default_seed(seed),
                rounds,
                Parallelism::default(),
            )
            .map_err(|e| match e {
                ZoError::InvalidConfig(msg) => CliError::Usage(msg),
                other => CliError::Failed(other.to_string()),
            })?;
            print_report(&report, json);
            report.pass
        }
        AuditCmd::Identities {
            samples,
            grid,
            seed,
            json,
        } => {
            let grid = match grid {
                Some(g) => parse_grid(&g)?,
                None => default_identity_grid(),
            };
            let rng = RngStream::new(default_seed(seed));
            let report = identity_audit(&grid, samples, &rng, Parallelism::default())
                .map_err(|e| CliError::Failed(e.to_string()))?;
            print_report(&report, json);
            report.pass
        }
        AuditCmd::Oracle { game } => {
            let (_, sys) = load_game(&game)?;
            let report = solution_oracle(&sys).map_err(|e| CliError::Failed(e.to_string()))?;
            println!(
                "residual: {:.6e}  threshold: {:.6e}  kernel dim: {}",
                report.residual, report.threshold, report.kernel_dim
            );
            if report.has_gne {
                println!("GNE exists");
                println!("x* = {:?}", report.z_bar.x());
                println!("lambda* = {:?}", report.z_bar.lambda());
            } else {
                println!("no GNE (Assumption 2 fails)");
            }
            report.has_gne
        }
    };
    Ok(if report {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

fn print_report(report: &gne_core::verification::CheckReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
}
