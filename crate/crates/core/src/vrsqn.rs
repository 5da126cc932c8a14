//! Variance-reduced zeroth-order quasi-Newton method. Constraints enter
//! through the Moreau envelope of the indicator, so the iteration itself is
//! unconstrained: the estimated composite gradient is scaled by a damped
//! limited-memory inverse Hessian built from full-overlap curvature pairs
//! (the same batch re-evaluated at consecutive iterates).

use rand::RngCore;

use crate::error::{Error, Result};
use crate::geometry::{self, ConvexSet};
use crate::linalg;
use crate::problems::StochasticProblem;
use crate::rng::{stream, STREAM_METRIC, STREAM_OPT, STREAM_OUTPUT};
use crate::schedules::{self, BatchSchedule, StepSchedule};
use crate::smoothing;
use crate::sqn_core::{PushOutcome, SqnMemory};
use crate::vrg::Checkpoint;

/// Direction rule for the first `memory` iterations, before the pair store
/// is considered warm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColdStart {
    /// Scale the gradient estimate by the current weight: `r = g / nu`.
    Scaled,
    /// Use the raw gradient estimate.
    Raw,
}

#[derive(Debug, Clone)]
pub struct VrsqnConfig {
    /// Smoothing radius, shared by the objective smoothing and the Moreau
    /// envelope of the indicator.
    pub eta: f64,
    pub step: StepSchedule,
    pub batch: BatchSchedule,
    /// Total function-evaluation budget; each iteration spends four
    /// evaluations per batch sample (each sample is evaluated antithetically
    /// at both endpoints of the step).
    pub budget: u64,
    /// Curvature pairs retained.
    pub memory: usize,
    /// Damping floor; `None` resolves to `l0^2 n / eta^2`, which in practice
    /// is large enough to make the floor the active scale.
    pub delta: Option<f64>,
    pub cold_start: ColdStart,
    /// Fraction of the trajectory excluded from the output window. The
    /// guarantee covers the full trajectory, so this defaults to zero.
    pub lambda: f64,
    pub max_iters: Option<u64>,
    /// Starting point, used as given (the iteration tolerates infeasible
    /// points); defaults to the set's center.
    pub x0: Option<Vec<f64>>,
    pub batch_cap: Option<u64>,
    pub checkpoints: bool,
    pub metric_samples: u64,
}

impl Default for VrsqnConfig {
    fn default() -> Self {
        VrsqnConfig {
            eta: 0.1,
            step: StepSchedule::Constant(0.01),
            batch: BatchSchedule::Constant { m: 8 },
            budget: 10_000,
            memory: 5,
            delta: None,
            cold_start: ColdStart::Scaled,
            lambda: 0.0,
            max_iters: None,
            x0: None,
            batch_cap: None,
            checkpoints: false,
            metric_samples: 1_000,
        }
    }
}

impl VrsqnConfig {
    pub fn resolved_delta(&self, problem: &dyn StochasticProblem) -> f64 {
        self.delta.unwrap_or_else(|| {
            let l0 = problem.l0();
            l0 * l0 * problem.dim() as f64 / (self.eta * self.eta)
        })
    }

    pub fn validate(&self, problem: &dyn StochasticProblem, set: &ConvexSet) -> Result<()> {
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(Error::invalid(format!(
                "smoothing radius must be positive, got {}",
                self.eta
            )));
        }
        self.step.validate()?;
        self.batch.validate()?;
        if self.memory == 0 {
            return Err(Error::invalid("memory must hold at least one pair"));
        }
        if let Some(d) = self.delta {
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::invalid(format!(
                    "damping floor must be positive and finite, got {d}"
                )));
            }
        }
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
        let d = self.resolved_delta(problem);
        if d * self.eta * self.eta > 4.0 {
            log::warn!(
                "delta eta^2 = {:.3e} > 4: the eigenvalue range of the inverse Hessian \
                 approximation is no longer certified",
                d * self.eta * self.eta
            );
        }
        Ok(())
    }
}

/// Observer hooks for verification instrumentation. Every submitted
/// curvature pair and the post-push memory state are exposed; the default
/// implementations do nothing, so production runs pay only two virtual
/// calls per iteration.
pub trait SqnProbe {
    fn on_pair(&mut self, _k: u64, _s: &[f64], _y: &[f64], _outcome: &PushOutcome) {}
    fn on_memory(&mut self, _k: u64, _memory: &SqnMemory) {}
}

/// Probe that ignores everything.
pub struct NoProbe;
impl SqnProbe for NoProbe {}

#[derive(Debug, Clone)]
pub struct VrsqnReport {
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
    /// Iterations whose curvature pair needed damping.
    pub damped: u64,
    /// Iterations whose step was too short to store a pair.
    pub skipped: u64,
    pub trace: Vec<Checkpoint>,
}

/// Ceiling on the expected final infeasibility of the Moreau-penalized
/// iteration: `eta (eps + 4 (2 pi)^(1/4) sqrt(n) l0)`, where `eps` is the
/// stationarity level reached on the smoothed composite.
pub fn infeasibility_bound(n: usize, l0: f64, eta: f64, eps: f64) -> f64 {
    let c = 4.0 * (2.0 * std::f64::consts::PI).powf(0.25);
    eta * (eps + c * (n as f64).sqrt() * l0)
}

pub fn vrsqn_run(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    config: &VrsqnConfig,
    seed: u64,
) -> Result<VrsqnReport> {
    vrsqn_run_probed(problem, set, config, seed, &mut NoProbe)
}

pub fn vrsqn_run_probed(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    config: &VrsqnConfig,
    seed: u64,
    probe: &mut dyn SqnProbe,
) -> Result<VrsqnReport> {
    config.validate(problem, set)?;
    let n = problem.dim();
    let l0 = problem.l0();
    let (iters, _planned_evals) = schedules::planned_iters(
        &config.batch,
        config.budget,
        config.max_iters,
        config.batch_cap,
        n,
        l0,
        4,
    )?;

    let window_lo = (config.lambda * iters as f64).ceil() as u64;
    if window_lo >= iters {
        return Err(Error::EmptyWindow);
    }
    let out_iter = {
        let mut out_rng = stream(seed, STREAM_OUTPUT);
        schedules::draw_window_index(&config.step, window_lo, iters - 1, &mut out_rng)
    };

    let mut x = match &config.x0 {
        Some(x0) => x0.clone(),
        None => set.center_point(n),
    };
    let delta = config.resolved_delta(problem);
    let mut memory = SqnMemory::new(n, config.memory, delta)?;
    let mut rng = stream(seed, STREAM_OPT);
    let mut metric_rng = stream(seed, STREAM_METRIC);
    let stride = (iters / 50).max(1);

    let mut report = VrsqnReport {
        x_out: Vec::new(),
        out_iter,
        x_final: Vec::new(),
        iters,
        evals: 0,
        metric_evals: 0,
        damped: 0,
        skipped: 0,
        trace: Vec::new(),
    };

    for k in 0..iters {
        if k == out_iter {
            report.x_out = x.clone();
        }
        if config.checkpoints && k % stride == 0 {
            snapshot(problem, set, &x, config, k, &mut report, &mut metric_rng)?;
        }
        let mut nk = config.batch.batch(k, n, l0);
        if let Some(cap) = config.batch_cap {
            nk = nk.min(cap);
        }
        let draws = smoothing::draw_batch(problem, config.eta, nk, &mut rng);
        let g = smoothing::sqn_grad(problem, set, &x, config.eta, &draws)?;

        let r = if k < config.memory as u64 {
            match config.cold_start {
                ColdStart::Scaled => {
                    let mut r = g.clone();
                    linalg::scale(&mut r, 1.0 / memory.nu());
                    r
                }
                ColdStart::Raw => g.clone(),
            }
        } else {
            memory.apply(&g)
        };

        let gamma = config.step.gamma(k);
        let mut x_next = x.clone();
        linalg::axpy(-gamma, &r, &mut x_next);
        if !linalg::all_finite(&x_next) {
            log::error!("iterate diverged at iteration {k}");
            return Err(Error::NonFinite { context: "iterate" });
        }

        // same draws at the new point: the difference isolates curvature
        let g_hat = smoothing::sqn_grad(problem, set, &x_next, config.eta, &draws)?;
        report.evals += 4 * nk;

        let s = linalg::sub(&x_next, &x);
        let y = linalg::sub(&g_hat, &g);
        let outcome = memory.push(&s, &y, linalg::norm(&x_next))?;
        match outcome {
            PushOutcome::Stored { damped: true, .. } => report.damped += 1,
            PushOutcome::Stored { damped: false, .. } => {}
            PushOutcome::Skipped => report.skipped += 1,
        }
        probe.on_pair(k, &s, &y, &outcome);
        probe.on_memory(k, &memory);

        x = x_next;
    }
    if config.checkpoints {
        snapshot(problem, set, &x, config, iters, &mut report, &mut metric_rng)?;
    }
    report.x_final = x;
    Ok(report)
}

fn snapshot(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    x: &[f64],
    config: &VrsqnConfig,
    k: u64,
    report: &mut VrsqnReport,
    metric_rng: &mut dyn RngCore,
) -> Result<()> {
    let m = config.metric_samples;
    let draws = smoothing::draw_batch(problem, config.eta, m, metric_rng);
    let g = smoothing::sqn_grad(problem, set, x, config.eta, &draws)?;
    let value = smoothing::smoothed_value(problem, x, config.eta, m, metric_rng);
    report.metric_evals += 3 * m;
    report.trace.push(Checkpoint {
        iter: k,
        evals: report.evals,
        stationarity_sq: linalg::norm_sq(&g),
        value,
        infeas: geometry::infeasibility(set, x)?,
    });
    Ok(())
}
