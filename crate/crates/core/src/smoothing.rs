//! Spherical smoothing: antithetic two-point gradient estimation on the
//! radius-eta sphere, batch averaging with sample retention for reuse, and
//! Monte Carlo diagnostics for the smoothed value.

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{self, ConvexSet};
use crate::linalg;
use crate::problems::{Noise, StochasticProblem};

/// One retained estimator sample: a sphere direction of norm eta plus the
/// noise realization it was paired with. Kept so the same (direction, noise)
/// can be re-evaluated at the next iterate.
#[derive(Debug, Clone)]
pub struct Draw {
    pub dir: Vec<f64>,
    pub noise: Noise,
}

/// Uniform point on the radius-`eta` sphere: normalized standard normals,
/// redrawn in the measure-zero all-zeros case.
pub fn draw_sphere(n: usize, eta: f64, rng: &mut dyn RngCore) -> Vec<f64> {
    debug_assert!(n >= 1 && eta > 0.0);
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = linalg::norm(&g);
        if r > 0.0 {
            return g.into_iter().map(|gi| gi * eta / r).collect();
        }
    }
}

/// Uniform point in the radius-`eta` ball: sphere direction scaled by
/// `U^(1/n)`.
pub fn draw_ball(n: usize, eta: f64, rng: &mut dyn RngCore) -> Vec<f64> {
    let mut v = draw_sphere(n, eta, rng);
    let t = rng.gen::<f64>().powf(1.0 / n as f64);
    linalg::scale(&mut v, t);
    v
}

/// Draw `count` independent (direction, noise) pairs for one batch.
pub fn draw_batch(
    problem: &dyn StochasticProblem,
    eta: f64,
    count: u64,
    rng: &mut dyn RngCore,
) -> Vec<Draw> {
    let n = problem.dim();
    (0..count)
        .map(|_| Draw {
            dir: draw_sphere(n, eta, rng),
            noise: problem.draw_noise(rng),
        })
        .collect()
}

/// Two-point estimate `(n / (2 eta)) (f~(x+v) - f~(x-v)) v / ||v||` for one
/// retained draw. Costs two function evaluations.
pub fn pair_estimate(
    problem: &dyn StochasticProblem,
    x: &[f64],
    draw: &Draw,
) -> Result<Vec<f64>> {
    let n = x.len();
    debug_assert_eq!(draw.dir.len(), n);
    let eta = linalg::norm(&draw.dir);
    debug_assert!(eta > 0.0);
    let xp: Vec<f64> = x.iter().zip(&draw.dir).map(|(a, b)| a + b).collect();
    let xm: Vec<f64> = x.iter().zip(&draw.dir).map(|(a, b)| a - b).collect();
    let fp = problem.eval(&xp, draw.noise);
    let fm = problem.eval(&xm, draw.noise);
    if !fp.is_finite() || !fm.is_finite() {
        log::error!("non-finite sample near x = {x:?}");
        return Err(Error::NonFinite {
            context: "sampled function value",
        });
    }
    // (n/(2 eta)) * diff * dir/eta, folding the normalization into one factor
    let factor = n as f64 * (fp - fm) / (2.0 * eta * eta);
    Ok(draw.dir.iter().map(|d| factor * d).collect())
}

/// Arithmetic mean of [`pair_estimate`] over a batch, in batch order (the
/// summation order is part of the reproducibility contract). Costs
/// `2 * draws.len()` evaluations.
pub fn batch_mean(
    problem: &dyn StochasticProblem,
    x: &[f64],
    draws: &[Draw],
) -> Result<Vec<f64>> {
    debug_assert!(!draws.is_empty());
    let mut acc = vec![0.0; x.len()];
    for draw in draws {
        let g = pair_estimate(problem, x, draw)?;
        linalg::axpy(1.0, &g, &mut acc);
    }
    linalg::scale(&mut acc, 1.0 / draws.len() as f64);
    Ok(acc)
}

/// Smoothed-objective-plus-indicator gradient estimate: [`batch_mean`] plus
/// the Moreau indicator gradient `(x - project(x)) / eta`. Reusing the same
/// `draws` at a second point yields the full-overlap pair for the curvature
/// vector.
pub fn sqn_grad(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    x: &[f64],
    eta: f64,
    draws: &[Draw],
) -> Result<Vec<f64>> {
    let mut g = batch_mean(problem, x, draws)?;
    let ind = geometry::moreau_indicator_grad(set, x, eta)?;
    linalg::axpy(1.0, &ind, &mut g);
    Ok(g)
}

/// Monte Carlo estimate of the smoothed value `E[f~(x + eta u, xi)]`,
/// `u` uniform in the unit ball. One evaluation per sample; diagnostic only.
pub fn smoothed_value(
    problem: &dyn StochasticProblem,
    x: &[f64],
    eta: f64,
    samples: u64,
    rng: &mut dyn RngCore,
) -> f64 {
    debug_assert!(samples >= 1);
    let n = x.len();
    let mut acc = 0.0;
    for _ in 0..samples {
        let u = draw_ball(n, eta, rng);
        let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + b).collect();
        acc += problem.eval(&y, problem.draw_noise(rng));
    }
    acc / samples as f64
}

/// Spherical-estimator mean for a deterministic function: estimates the
/// smoothed gradient of `f` itself from `samples` antithetic sphere pairs.
/// Used for reporting metrics against an exact oracle.
pub fn smoothed_grad_deterministic(
    f: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
    eta: f64,
    samples: u64,
    rng: &mut dyn RngCore,
) -> Vec<f64> {
    debug_assert!(samples >= 1);
    let n = x.len();
    let mut acc = vec![0.0; n];
    for _ in 0..samples {
        let v = draw_sphere(n, eta, rng);
        let xp: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + b).collect();
        let xm: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - b).collect();
        let factor = n as f64 * (f(&xp) - f(&xm)) / (2.0 * eta * eta);
        linalg::axpy(factor, &v, &mut acc);
    }
    linalg::scale(&mut acc, 1.0 / samples as f64);
    acc
}
