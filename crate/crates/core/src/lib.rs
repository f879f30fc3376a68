//! Generalized Nash equilibria of quadratic games with individual linear
//! equality coupling constraints.
//!
//! The KKT conditions of the (possibly non-monotone) game are reformulated
//! as the convex gap minimization F(z) = ‖Gz + e‖² over the primal-dual
//! point z = [x, λ]. F satisfies a Polyak–Łojasiewicz inequality with
//! constant μ_F = 2(σ_min⁺(G))², which two solvers exploit:
//!
//! - [`first_order`]: exact-gradient descent with constant step 1/L_F,
//!   geometric convergence;
//! - [`zero_order`]: a fully distributed four-query procedure in which
//!   every simulated player observes only local cost values and local
//!   constraint residuals, exchanges two scalars per round with an
//!   aggregator, and follows a diminishing step schedule.
//!
//! [`verification`] holds the independent oracles (finite differences,
//! Monte-Carlo estimator and Gaussian-identity audits, least-squares
//! solution oracle) used to cross-check both solvers.

pub mod experiment;
pub mod first_order;
pub mod game;
pub mod kkt;
pub mod numerics;
pub mod parallel;
pub mod trace;
pub mod verification;
pub mod zero_order;

pub use first_order::{solve_first_order, FoConfig};
pub use game::{GameConfig, PlayerOracle, QuadraticGame};
pub use kkt::{assemble, KktSystem, PrimalDual};
pub use parallel::Parallelism;
pub use trace::{Trace, TraceOptions};
pub use zero_order::{solve_zero_order, StepSchedule, ZoConfig};
