//! Variance-reduced zeroth-order projected gradient method. Each iteration
//! averages a growing batch of antithetic sphere samples, takes a projected
//! step, and the reported iterate is drawn step-size-weighted from the tail
//! window of the trajectory.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::geometry::{self, ConvexSet};
use crate::linalg;
use crate::problems::StochasticProblem;
use crate::rng::{stream, STREAM_METRIC, STREAM_OPT, STREAM_OUTPUT};
use crate::schedules::{draw_window_index, BatchSchedule, StepSchedule};
use crate::smoothing;

/// Periodic progress snapshot. Metric sampling runs on its own random
/// stream, so enabling snapshots never changes the trajectory.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    /// Iteration the snapshot was taken at (state before that update).
    pub iter: u64,
    /// Optimizer evaluations consumed so far (metric cost excluded).
    pub evals: u64,
    /// Squared stationarity measure: the projected-residual norm for the
    /// projected-gradient solver, the smoothed composite gradient norm for
    /// the quasi-Newton one.
    pub stationarity_sq: f64,
    /// Monte Carlo estimate of the smoothed objective value.
    pub value: f64,
    /// Distance to the feasible set.
    pub infeas: f64,
}

#[derive(Debug, Clone)]
pub struct VrgConfig {
    /// Smoothing radius.
    pub eta: f64,
    pub step: StepSchedule,
    pub batch: BatchSchedule,
    /// Total function-evaluation budget; each iteration spends two
    /// evaluations per batch sample and the loop stops before the first
    /// iteration that would overrun.
    pub budget: u64,
    /// Fraction of the trajectory excluded from the output window: the
    /// reported iterate is drawn from iterations `ceil(lambda K) .. K-1`.
    pub lambda: f64,
    pub max_iters: Option<u64>,
    /// Starting point; defaults to the set's center and is projected first
    /// in either case.
    pub x0: Option<Vec<f64>>,
    /// Optional ceiling on the per-iteration batch size.
    pub batch_cap: Option<u64>,
    /// Record roughly fifty progress snapshots along the run.
    pub checkpoints: bool,
    /// Samples per metric estimate in a snapshot.
    pub metric_samples: u64,
}

impl Default for VrgConfig {
    fn default() -> Self {
        VrgConfig {
            eta: 0.1,
            step: StepSchedule::Constant(0.01),
            batch: BatchSchedule::Constant { m: 8 },
            budget: 10_000,
            lambda: 0.5,
            max_iters: None,
            x0: None,
            batch_cap: None,
            checkpoints: false,
            metric_samples: 1_000,
        }
    }
}

impl VrgConfig {
    pub fn validate(&self, problem: &dyn StochasticProblem, set: &ConvexSet) -> Result<()> {
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(Error::invalid(format!(
                "smoothing radius must be positive, got {}",
                self.eta
            )));
        }
        self.step.validate()?;
        self.batch.validate()?;
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(Error::invalid(format!(
                "output window fraction must lie in [0, 1), got {}",
                self.lambda
            )));
        }
        if self.metric_samples == 0 {
            return Err(Error::invalid("metric_samples must be at least 1"));
        }
        let n = problem.dim();
        set.check_dim(n)?;
        if let Some(x0) = &self.x0 {
            if x0.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: x0.len(),
                });
            }
            if !linalg::all_finite(x0) {
                return Err(Error::NonFinite {
                    context: "starting point",
                });
            }
        }
        if let StepSchedule::Constant(g) = self.step {
            let threshold = self.eta / ((n as f64).sqrt() * problem.l0());
            if g >= threshold {
                log::warn!(
                    "constant step {g} is at or above the stability guideline {threshold:.3e} \
                     (eta / (sqrt(n) l0)); expect the residual to stall at a noise floor"
                );
            }
        }
        Ok(())
    }

}

#[derive(Debug, Clone)]
pub struct VrgReport {
    /// Randomly selected iterate the theory makes its guarantee for.
    pub x_out: Vec<f64>,
    /// Iteration index the output was taken at.
    pub out_iter: u64,
    /// Last iterate.
    pub x_final: Vec<f64>,
    /// Iterations performed.
    pub iters: u64,
    /// Function evaluations spent by the optimizer.
    pub evals: u64,
    /// Function evaluations spent on progress metrics (not budgeted).
    pub metric_evals: u64,
    pub trace: Vec<Checkpoint>,
}

/// Squared norm of the projected residual `beta (x - project(x - g/beta))`
/// where `g` averages `samples` antithetic sphere pairs at `x`. Costs
/// `2 * samples` evaluations.
pub fn measure_residual(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    x: &[f64],
    eta: f64,
    beta: f64,
    samples: u64,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    let draws = smoothing::draw_batch(problem, eta, samples, rng);
    let g = smoothing::batch_mean(problem, x, &draws)?;
    let r = geometry::residual(set, x, &g, beta)?;
    Ok(linalg::norm_sq(&r))
}

pub fn vrg_run(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    config: &VrgConfig,
    seed: u64,
) -> Result<VrgReport> {
    config.validate(problem, set)?;
    let n = problem.dim();
    let l0 = problem.l0();
    let (iters, _planned_evals) = crate::schedules::planned_iters(
        &config.batch,
        config.budget,
        config.max_iters,
        config.batch_cap,
        n,
        l0,
        2,
    )?;

    let window_lo = (config.lambda * iters as f64).ceil() as u64;
    if window_lo >= iters {
        return Err(Error::EmptyWindow);
    }
    let out_iter = {
        let mut out_rng = stream(seed, STREAM_OUTPUT);
        draw_window_index(&config.step, window_lo, iters - 1, &mut out_rng)
    };

    let mut x = match &config.x0 {
        Some(x0) => geometry::project(set, x0)?,
        None => set.center_point(n),
    };
    let mut rng = stream(seed, STREAM_OPT);
    let mut metric_rng = stream(seed, STREAM_METRIC);

    let stride = (iters / 50).max(1);
    let beta = 1.0 / config.step.gamma0();

    let mut report = VrgReport {
        x_out: Vec::new(),
        out_iter,
        x_final: Vec::new(),
        iters,
        evals: 0,
        metric_evals: 0,
        trace: Vec::new(),
    };

    for k in 0..iters {
        if k == out_iter {
            report.x_out = x.clone();
        }
        if config.checkpoints && k % stride == 0 {
            snapshot(problem, set, &x, config, beta, k, &mut report, &mut metric_rng)?;
        }
        let mut nk = config.batch.batch(k, n, l0);
        if let Some(cap) = config.batch_cap {
            nk = nk.min(cap);
        }
        let draws = smoothing::draw_batch(problem, config.eta, nk, &mut rng);
        let g = smoothing::batch_mean(problem, &x, &draws)?;
        report.evals += 2 * nk;

        let gamma = config.step.gamma(k);
        let mut z = x.clone();
        linalg::axpy(-gamma, &g, &mut z);
        x = geometry::project(set, &z)?;
        if !linalg::all_finite(&x) {
            log::error!("iterate diverged at iteration {k}");
            return Err(Error::NonFinite { context: "iterate" });
        }
    }
    if config.checkpoints {
        snapshot(problem, set, &x, config, beta, iters, &mut report, &mut metric_rng)?;
    }
    report.x_final = x;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn snapshot(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    x: &[f64],
    config: &VrgConfig,
    beta: f64,
    k: u64,
    report: &mut VrgReport,
    metric_rng: &mut dyn RngCore,
) -> Result<()> {
    let m = config.metric_samples;
    let stationarity_sq = measure_residual(problem, set, x, config.eta, beta, m, metric_rng)?;
    let value = smoothing::smoothed_value(problem, x, config.eta, m, metric_rng);
    report.metric_evals += 3 * m;
    report.trace.push(Checkpoint {
        iter: k,
        evals: report.evals,
        stationarity_sq,
        value,
        infeas: geometry::infeasibility(set, x)?,
    });
    Ok(())
}
