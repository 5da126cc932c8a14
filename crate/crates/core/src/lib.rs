//! Zeroth-order solvers for nonsmooth nonconvex stochastic minimization over
//! closed convex sets.
//!
//! The crate provides two derivative-free solvers built on spherical smoothing
//! of the objective:
//!
//! * [`vrg::vrg_run`]: projected mini-batch descent with growing batch sizes
//!   and a randomized window output rule,
//! * [`vrsqn::vrsqn_run`]: an unconstrained loop on the smoothed objective plus
//!   a Moreau-smoothed indicator, preconditioned by a damped limited-memory
//!   quasi-Newton operator with full gradient-sample overlap.
//!
//! Both consume a [`problems::StochasticProblem`] (only noisy function values,
//! never gradients) and a [`geometry::ConvexSet`]. The [`harness`] module runs
//! seeded replicated experiments and writes CSV summaries; the `zo-nsnc` binary
//! wraps it in a small CLI.
//!
//! ```
//! use zo_nsnc::{geometry::ConvexSet, problems, schedules, vrg};
//!
//! let problem = problems::make_min_quadratics(4);
//! let set = ConvexSet::symmetric_box(4, 5.0).unwrap();
//! let config = vrg::VrgConfig {
//!     eta: 0.1,
//!     step: schedules::StepSchedule::Constant(0.01),
//!     batch: schedules::BatchSchedule::AffineTable { a: 0.1 },
//!     budget: 20_000,
//!     ..vrg::VrgConfig::default()
//! };
//! let report = vrg::vrg_run(&problem, &set, &config, 7).unwrap();
//! assert!(report.evals <= 20_000);
//! ```

pub mod config;
pub mod error;
pub mod geometry;
pub mod harness;
pub(crate) mod linalg;
pub mod problems;
pub mod rng;
pub mod schedules;
pub mod smoothing;
pub mod sqn_core;
pub mod vrg;
pub mod vrsqn;

pub use error::{Error, Result};
