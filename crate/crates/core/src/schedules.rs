//! Step-size and batch-size schedules, the damped quasi-Newton step-size
//! bound, and the weighted random draw used to pick the reported iterate.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// Step-size sequence gamma_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// gamma_k = gamma0
    Constant(f64),
    /// gamma_k = gamma0 / sqrt(k + 1)
    Diminishing { gamma0: f64 },
    /// gamma_k = 1 / (1 + sqrt(k + 1) / c)
    DecaySqrt { c: f64 },
    /// gamma_k = 1 / (1 + (k + 1) / c)
    DecayLinear { c: f64 },
}

impl StepSchedule {
    pub fn gamma(&self, k: u64) -> f64 {
        let t = (k + 1) as f64;
        match *self {
            StepSchedule::Constant(g) => g,
            StepSchedule::Diminishing { gamma0 } => gamma0 / t.sqrt(),
            StepSchedule::DecaySqrt { c } => 1.0 / (1.0 + t.sqrt() / c),
            StepSchedule::DecayLinear { c } => 1.0 / (1.0 + t / c),
        }
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma(0)
    }

    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            StepSchedule::Constant(g) => g,
            StepSchedule::Diminishing { gamma0 } => gamma0,
            StepSchedule::DecaySqrt { c } | StepSchedule::DecayLinear { c } => c,
        };
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::invalid(format!(
                "step schedule parameter must be positive and finite, got {v}"
            )));
        }
        Ok(())
    }
}

/// Batch-size sequence N_k. Sizes depend on the problem dimension `n` and
/// Lipschitz constant `l0` where the growth rate is tied to them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BatchSchedule {
    /// N_k = m
    Constant { m: u64 },
    /// N_k = ceil(a sqrt(n) l0 (k + 1))
    Linear { a: f64 },
    /// N_k = ceil(a sqrt(n) l0 sqrt(k + 1))
    Sqrt { a: f64 },
    /// N_k = ceil(c (k + 1)^(1 + b))
    Poly { c: f64, b: f64 },
    /// N_k = ceil(2 + a k)
    AffineTable { a: f64 },
}

impl BatchSchedule {
    pub fn batch(&self, k: u64, n: usize, l0: f64) -> u64 {
        let t = (k + 1) as f64;
        let raw = match *self {
            BatchSchedule::Constant { m } => return m.max(1),
            BatchSchedule::Linear { a } => a * (n as f64).sqrt() * l0 * t,
            BatchSchedule::Sqrt { a } => a * (n as f64).sqrt() * l0 * t.sqrt(),
            BatchSchedule::Poly { c, b } => c * t.powf(1.0 + b),
            BatchSchedule::AffineTable { a } => 2.0 + a * k as f64,
        };
        (raw.ceil() as u64).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            BatchSchedule::Constant { m } => m >= 1,
            BatchSchedule::Linear { a } | BatchSchedule::Sqrt { a } => a.is_finite() && a > 0.0,
            BatchSchedule::Poly { c, b } => c.is_finite() && c > 0.0 && b.is_finite() && b >= 0.0,
            BatchSchedule::AffineTable { a } => a.is_finite() && a >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid batch schedule {self:?}")))
        }
    }
}

/// Smoothed composite Lipschitz constant L_eta = (l0 sqrt(n) + 1) / eta.
pub fn smoothed_lipschitz(eta: f64, l0: f64, n: usize) -> f64 {
    (l0 * (n as f64).sqrt() + 1.0) / eta
}

/// Step-size ceiling for the damped quasi-Newton iteration: lambda_min /
/// (lambda_max^2 L_eta), from the worst-case eigenvalue range of the inverse
/// Hessian approximation with `p` stored pairs and damping floor `delta`.
/// The bounds assume delta * eta^2 <= 4; outside that range the value is
/// still returned but a warning is logged. Diagnostic, not enforced.
pub fn sqn_stepsize_bound(eta: f64, delta: f64, p: usize, l0: f64, n: usize) -> f64 {
    assert!(eta > 0.0 && delta > 0.0);
    if delta * eta * eta > 4.0 {
        log::warn!(
            "delta eta^2 = {} > 4: eigenvalue range no longer certified",
            delta * eta * eta
        );
    }
    let l_eta = smoothed_lipschitz(eta, l0, n);
    let lambda_min = delta / (32.0 * (2.0 + delta) * (p as f64 + 1.0) * l_eta * l_eta);
    let lambda_max = if p == 0 {
        // no stored pairs: H = nu^{-1} I with nu >= delta, so the spectrum
        // is a single point at most 1/delta; the product bound reduces to 1
        1.0
    } else {
        (4.0 * p as f64 + 1.0)
            * (1.0 + 16.0 * l_eta * (2.0 + delta).sqrt() / delta).powi(2 * p as i32)
    };
    lambda_min / (lambda_max * lambda_max * l_eta)
}

/// Iterations a budget affords at `evals_per_sample` evaluations per batch
/// sample, stopping before the first unaffordable batch, and the exact
/// evaluation count those iterations spend. Resolved ahead of the solver
/// loop so the output index can be drawn up front.
pub(crate) fn planned_iters(
    batch: &BatchSchedule,
    budget: u64,
    max_iters: Option<u64>,
    batch_cap: Option<u64>,
    n: usize,
    l0: f64,
    evals_per_sample: u64,
) -> Result<(u64, u64)> {
    // budgets that imply more iterations than this need an explicit max_iters
    const PLANNER_CAP: u64 = 100_000_000;
    let mut evals = 0u64;
    let mut k = 0u64;
    loop {
        if let Some(cap) = max_iters {
            if k >= cap {
                break;
            }
        }
        if k >= PLANNER_CAP {
            return Err(Error::invalid(format!(
                "budget implies more than {PLANNER_CAP} iterations; set max_iters"
            )));
        }
        let mut nk = batch.batch(k, n, l0);
        if let Some(cap) = batch_cap {
            nk = nk.min(cap);
        }
        let cost = evals_per_sample * nk;
        if evals + cost > budget {
            break;
        }
        evals += cost;
        k += 1;
    }
    if k == 0 {
        return Err(Error::invalid(format!(
            "budget {budget} cannot cover the first batch"
        )));
    }
    Ok((k, evals))
}

/// Draw an index from `lo..=hi` with probability proportional to gamma_j.
/// Used to select the reported iterate.
pub(crate) fn draw_window_index(
    step: &StepSchedule,
    lo: u64,
    hi: u64,
    rng: &mut dyn RngCore,
) -> u64 {
    debug_assert!(lo <= hi);
    let total: f64 = (lo..=hi).map(|k| step.gamma(k)).sum();
    let mut t = rng.gen::<f64>() * total;
    for k in lo..hi {
        t -= step.gamma(k);
        if t <= 0.0 {
            return k;
        }
    }
    hi
}
