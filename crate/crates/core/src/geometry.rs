//! Closed convex feasible sets and the maps built on them: Euclidean
//! projection, the gradient of the Moreau-smoothed indicator, and the
//! projected-gradient residual used as the stationarity measure.

use crate::error::{Error, Result};
use crate::linalg;

/// A closed convex feasible set with a cheap exact projection.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    /// All of R^n; projection is the identity.
    WholeSpace,
    /// Axis-aligned box `[lower_i, upper_i]` per coordinate.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Euclidean ball of the given radius around `center`.
    Ball { center: Vec<f64>, radius: f64 },
}

impl ConvexSet {
    pub fn whole_space() -> Self {
        ConvexSet::WholeSpace
    }

    /// Box with the given per-coordinate bounds. Requires finite bounds with
    /// `lower_i <= upper_i`.
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::invalid("box needs at least one coordinate"));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(Error::invalid(format!(
                    "box bounds must be finite with lower <= upper, got [{l}, {u}]"
                )));
            }
        }
        Ok(ConvexSet::Box { lower, upper })
    }

    /// Cube `[-half_width, half_width]^n`.
    pub fn symmetric_box(n: usize, half_width: f64) -> Result<Self> {
        if half_width <= 0.0 || !half_width.is_finite() {
            return Err(Error::invalid("box half-width must be positive"));
        }
        Self::boxed(vec![-half_width; n], vec![half_width; n])
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("ball needs at least one coordinate"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("ball radius must be positive"));
        }
        if !linalg::all_finite(&center) {
            return Err(Error::invalid("ball center must be finite"));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    /// Dimension the set constrains, `None` for the whole space (any n fits).
    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexSet::WholeSpace => None,
            ConvexSet::Box { lower, .. } => Some(lower.len()),
            ConvexSet::Ball { center, .. } => Some(center.len()),
        }
    }

    /// Reject vectors of a dimension the set cannot hold.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != n => Err(Error::DimensionMismatch { expected: d, got: n }),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        infeasibility(self, x).map(|d| d <= tol).unwrap_or(false)
    }

    /// Canonical start point: box center, ball center, or the origin.
    pub fn center_point(&self, n: usize) -> Vec<f64> {
        match self {
            ConvexSet::WholeSpace => vec![0.0; n],
            ConvexSet::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| 0.5 * (l + u))
                .collect(),
            ConvexSet::Ball { center, .. } => center.clone(),
        }
    }
}

/// Euclidean projection onto the set. Exact for all three set kinds.
pub fn project(set: &ConvexSet, x: &[f64]) -> Result<Vec<f64>> {
    set.check_dim(x.len())?;
    Ok(match set {
        ConvexSet::WholeSpace => x.to_vec(),
        ConvexSet::Box { lower, upper } => x
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(xi, (l, u))| xi.clamp(*l, *u))
            .collect(),
        ConvexSet::Ball { center, radius } => {
            let d = linalg::dist(x, center);
            if d <= *radius {
                x.to_vec()
            } else {
                let t = radius / d;
                x.iter()
                    .zip(center)
                    .map(|(xi, ci)| ci + t * (xi - ci))
                    .collect()
            }
        }
    })
}

/// Distance to the set, `||x - project(x)||`.
pub fn infeasibility(set: &ConvexSet, x: &[f64]) -> Result<f64> {
    let p = project(set, x)?;
    Ok(linalg::dist(x, &p))
}

/// Gradient of the Moreau-smoothed indicator, `(x - project(x)) / eta`.
/// Vanishes on the set and is (1/eta)-Lipschitz.
pub fn moreau_indicator_grad(set: &ConvexSet, x: &[f64], eta: f64) -> Result<Vec<f64>> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::invalid("smoothing radius eta must be positive"));
    }
    let p = project(set, x)?;
    Ok(x.iter().zip(&p).map(|(xi, pi)| (xi - pi) / eta).collect())
}

/// Projected-gradient residual `beta * (x - project(x - g / beta))`.
///
/// Its norm is the stationarity measure reported by the solvers: zero exactly
/// when `x` is a fixed point of the projected step.
pub fn residual(set: &ConvexSet, x: &[f64], g: &[f64], beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid("residual scale beta must be positive"));
    }
    if x.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: g.len(),
        });
    }
    let stepped: Vec<f64> = x.iter().zip(g).map(|(xi, gi)| xi - gi / beta).collect();
    let p = project(set, &stepped)?;
    Ok(x.iter().zip(&p).map(|(xi, pi)| beta * (xi - pi)).collect())
}
