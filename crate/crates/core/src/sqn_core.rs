//! Damped limited-memory quasi-Newton machinery: curvature-pair damping,
//! the bounded FIFO pair store, the two-loop inverse application, and dense
//! reference reconstructions used only for verification.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg;

/// Scaling weight for the next update:
/// `nu = max(y'y / (s'y + delta s's), delta)`, falling back to `delta`
/// when the denominator is nonpositive.
pub fn compute_nu(s: &[f64], y: &[f64], delta: f64) -> Result<f64> {
    let ss = linalg::norm_sq(s);
    if ss == 0.0 {
        return Err(Error::invalid("curvature step s must be nonzero"));
    }
    let sy = linalg::dot(s, y);
    let yy = linalg::norm_sq(y);
    let denom = sy + delta * ss;
    if denom <= 0.0 {
        Ok(delta)
    } else {
        Ok((yy / denom).max(delta))
    }
}

/// Damping factor: 1 when `s'y` already carries at least a quarter of
/// `nu ||s||^2` of curvature, otherwise the convex weight that pulls the
/// damped pair back onto that threshold.
pub fn damping_phi(s: &[f64], y: &[f64], nu: f64) -> f64 {
    let ss = linalg::norm_sq(s);
    let sy = linalg::dot(s, y);
    let floor = 0.25 * nu * ss;
    if sy >= floor {
        1.0
    } else {
        0.75 * nu * ss / (nu * ss - sy)
    }
}

/// Damped curvature vector `ybar = phi y + (1 - phi) nu s`. With `phi` from
/// [`damping_phi`] this satisfies `s'ybar = 0.25 nu ||s||^2` exactly
/// whenever damping was active.
pub fn make_ybar(s: &[f64], y: &[f64], phi: f64, nu: f64) -> Vec<f64> {
    s.iter()
        .zip(y)
        .map(|(si, yi)| phi * yi + (1.0 - phi) * nu * si)
        .collect()
}

/// What happened to a submitted curvature pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PushOutcome {
    /// Pair accepted; `damped` records whether the damping branch fired.
    Stored { damped: bool, s_ybar: f64, nu_next: f64 },
    /// Step too short to carry curvature information; memory unchanged.
    Skipped,
}

struct Pair {
    s: Vec<f64>,
    ybar: Vec<f64>,
    rho: f64, // 1 / (s'ybar), always positive for a stored pair
}

/// Bounded FIFO store of damped curvature pairs with the associated scaling
/// weight nu. The inverse Hessian approximation it represents is
/// `H = two-loop(pairs, H0 = nu^{-1} I)`.
pub struct SqnMemory {
    n: usize,
    capacity: usize,
    delta: f64,
    nu: f64,
    pairs: VecDeque<Pair>,
}

impl SqnMemory {
    pub fn new(n: usize, capacity: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if capacity == 0 {
            return Err(Error::invalid("memory capacity must be at least 1"));
        }
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::invalid(format!(
                "damping floor delta must be positive and finite, got {delta}"
            )));
        }
        Ok(SqnMemory {
            n,
            capacity,
            delta,
            nu: delta,
            pairs: VecDeque::with_capacity(capacity + 1),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Current scaling weight (seed of the two-loop recursion).
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Submit a raw curvature pair. Steps shorter than
    /// `1e-14 (1 + x_norm)` are rejected as numerically empty.
    pub fn push(&mut self, s: &[f64], y: &[f64], x_norm: f64) -> Result<PushOutcome> {
        if s.len() != self.n || y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: if s.len() != self.n { s.len() } else { y.len() },
            });
        }
        if !linalg::all_finite(s) || !linalg::all_finite(y) {
            return Err(Error::NonFinite {
                context: "curvature pair",
            });
        }
        if linalg::norm(s) <= 1e-14 * (1.0 + x_norm) {
            return Ok(PushOutcome::Skipped);
        }
        let nu_next = compute_nu(s, y, self.delta)?;
        let phi = damping_phi(s, y, nu_next);
        let ybar = make_ybar(s, y, phi, nu_next);
        let s_ybar = linalg::dot(s, &ybar);
        if s_ybar <= 0.0 {
            // unreachable in exact arithmetic: damping guarantees
            // s'ybar = 0.25 nu ||s||^2 > 0
            return Err(Error::CurvatureBreach);
        }
        self.pairs.push_back(Pair {
            s: s.to_vec(),
            ybar,
            rho: 1.0 / s_ybar,
        });
        if self.pairs.len() > self.capacity {
            self.pairs.pop_front();
        }
        self.nu = nu_next;
        Ok(PushOutcome::Stored {
            damped: phi < 1.0,
            s_ybar,
            nu_next,
        })
    }

    /// Apply the inverse Hessian approximation: `r = H g` via the two-loop
    /// recursion seeded with `H0 = nu^{-1} I`.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        debug_assert_eq!(g.len(), self.n);
        let mut q = g.to_vec();
        let mut alphas = vec![0.0; self.pairs.len()];
        for (i, pair) in self.pairs.iter().enumerate().rev() {
            let alpha = pair.rho * linalg::dot(&pair.s, &q);
            linalg::axpy(-alpha, &pair.ybar, &mut q);
            alphas[i] = alpha;
        }
        linalg::scale(&mut q, 1.0 / self.nu);
        let mut r = q;
        for (i, pair) in self.pairs.iter().enumerate() {
            let beta = pair.rho * linalg::dot(&pair.ybar, &r);
            linalg::axpy(alphas[i] - beta, &pair.s, &mut r);
        }
        r
    }

    /// Dense inverse Hessian approximation, rebuilt by applying the stored
    /// updates oldest to newest:
    /// `H <- (I - rho s ybar') H (I - rho ybar s') + rho s s'`.
    /// Verification aid; O(p n^2), never used by the solver loop.
    pub fn dense_inverse_hessian(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut h = identity(n);
        for row in h.iter_mut() {
            linalg::scale(row, 1.0 / self.nu);
        }
        for pair in &self.pairs {
            // w = H ybar (H symmetric throughout)
            let w: Vec<f64> = h.iter().map(|row| linalg::dot(row, &pair.ybar)).collect();
            let ybar_h_ybar = linalg::dot(&pair.ybar, &w);
            let rho = pair.rho;
            let mut next = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    next[i][j] = h[i][j] - rho * (pair.s[i] * w[j] + w[i] * pair.s[j])
                        + rho * rho * ybar_h_ybar * pair.s[i] * pair.s[j]
                        + rho * pair.s[i] * pair.s[j];
                }
            }
            h = next;
        }
        h
    }

    /// Dense direct Hessian approximation via the damped BFGS recursion
    /// `B <- B - B s s' B / (s' B s) + ybar ybar' / (s' ybar)` from
    /// `B0 = nu I`, oldest to newest. Verification aid.
    pub fn dense_hessian(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut b = identity(n);
        for row in b.iter_mut() {
            linalg::scale(row, self.nu);
        }
        for pair in &self.pairs {
            let bs: Vec<f64> = b.iter().map(|row| linalg::dot(row, &pair.s)).collect();
            let s_b_s = linalg::dot(&pair.s, &bs);
            debug_assert!(s_b_s > 0.0);
            let mut next = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    next[i][j] = b[i][j] - bs[i] * bs[j] / s_b_s
                        + pair.ybar[i] * pair.ybar[j] * pair.rho;
                }
            }
            b = next;
        }
        b
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, STREAM_OPT};
    use rand::Rng;

    fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
        m.iter().map(|row| linalg::dot(row, v)).collect()
    }

    #[test]
    fn empty_memory_applies_inverse_delta() {
        let mem = SqnMemory::new(3, 2, 4.0).unwrap();
        let r = mem.apply(&[8.0, -4.0, 0.0]);
        assert_eq!(r, vec![2.0, -1.0, 0.0]);
    }

    #[test]
    fn constructor_rejects_degenerate_arguments() {
        assert!(SqnMemory::new(0, 1, 1.0).is_err());
        assert!(SqnMemory::new(3, 0, 1.0).is_err());
        assert!(SqnMemory::new(3, 1, 0.0).is_err());
        assert!(SqnMemory::new(3, 1, f64::NAN).is_err());
    }

    #[test]
    fn single_identity_pair_acts_as_identity() {
        // s = y = e1 with delta = 1: nu = max(1/(1+1), 1) = 1, no damping,
        // and H maps e1 -> e1 and e2 -> e2
        let mut mem = SqnMemory::new(2, 1, 1.0).unwrap();
        let out = mem.push(&[1.0, 0.0], &[1.0, 0.0], 1.0).unwrap();
        match out {
            PushOutcome::Stored { damped, s_ybar, nu_next } => {
                assert!(!damped);
                assert!((s_ybar - 1.0).abs() < 1e-15);
                assert!((nu_next - 1.0).abs() < 1e-15);
            }
            PushOutcome::Skipped => panic!("pair should be stored"),
        }
        assert_eq!(mem.apply(&[1.0, 0.0]), vec![1.0, 0.0]);
        assert_eq!(mem.apply(&[0.0, 1.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn damped_branch_lands_exactly_on_curvature_floor() {
        let mut rng = stream(60, STREAM_OPT);
        let mut hits = 0;
        for _ in 0..200 {
            let n = rng.gen_range(2..6);
            let delta = rng.gen_range(0.5..4.0);
            let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if linalg::norm(&s) < 1e-3 {
                continue;
            }
            // y anti-aligned with s forces the damping branch
            let y: Vec<f64> = s.iter().map(|v| -2.0 * v).collect();
            let mut mem = SqnMemory::new(n, 3, delta).unwrap();
            match mem.push(&s, &y, 1.0).unwrap() {
                PushOutcome::Stored { damped, s_ybar, nu_next } => {
                    assert!(damped);
                    let floor = 0.25 * nu_next * linalg::norm_sq(&s);
                    assert!(
                        (s_ybar - floor).abs() <= 1e-12 * floor,
                        "s_ybar {s_ybar} floor {floor}"
                    );
                    hits += 1;
                }
                PushOutcome::Skipped => panic!("nondegenerate pair skipped"),
            }
        }
        assert!(hits > 150);
    }

    #[test]
    fn negative_denominator_falls_back_to_delta() {
        // y = -3 s with delta = 1: s'y + delta s's = -2||s||^2 < 0
        let s = vec![1.0, 1.0];
        let y = vec![-3.0, -3.0];
        let nu = compute_nu(&s, &y, 1.0).unwrap();
        assert_eq!(nu, 1.0);
        let mut mem = SqnMemory::new(2, 2, 1.0).unwrap();
        match mem.push(&s, &y, 0.0).unwrap() {
            PushOutcome::Stored { damped, nu_next, .. } => {
                assert!(damped);
                assert_eq!(nu_next, 1.0);
            }
            PushOutcome::Skipped => panic!(),
        }
    }

    #[test]
    fn tiny_steps_are_skipped() {
        let mut mem = SqnMemory::new(2, 2, 1.0).unwrap();
        let out = mem
            .push(&[1e-15, 0.0], &[1.0, 0.0], 10.0)
            .unwrap();
        assert_eq!(out, PushOutcome::Skipped);
        assert_eq!(mem.len(), 0);
        assert_eq!(mem.nu(), 1.0);
    }

    #[test]
    fn eviction_is_first_in_first_out() {
        let mut rng = stream(61, STREAM_OPT);
        let n = 4;
        let mut pairs = Vec::new();
        for _ in 0..3 {
            let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            pairs.push((s, y));
        }
        let mut full = SqnMemory::new(n, 2, 1.0).unwrap();
        for (s, y) in &pairs {
            full.push(s, y, 1.0).unwrap();
        }
        assert_eq!(full.len(), 2);
        // pushing the same trailing pairs into a fresh store must agree:
        // damping depends only on the pair itself and eviction is FIFO
        let mut tail = SqnMemory::new(n, 2, 1.0).unwrap();
        for (s, y) in &pairs[1..] {
            tail.push(s, y, 1.0).unwrap();
        }
        let (hf, ht) = (full.dense_inverse_hessian(), tail.dense_inverse_hessian());
        for i in 0..n {
            for j in 0..n {
                assert!((hf[i][j] - ht[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn two_loop_matches_dense_reconstruction() {
        let mut rng = stream(62, STREAM_OPT);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8usize);
            let cap = rng.gen_range(1..=5usize);
            let delta = rng.gen_range(0.1..5.0);
            let mut mem = SqnMemory::new(n, cap, delta).unwrap();
            let pushes = rng.gen_range(0..=7);
            for _ in 0..pushes {
                let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                if linalg::norm(&s) < 1e-6 {
                    continue;
                }
                mem.push(&s, &y, 1.0).unwrap();
            }
            let h = mem.dense_inverse_hessian();
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let via_loop = mem.apply(&g);
            let via_dense = mat_vec(&h, &g);
            for j in 0..n {
                assert!(
                    (via_loop[j] - via_dense[j]).abs() <= 1e-10,
                    "n={n} cap={cap}: {} vs {}",
                    via_loop[j],
                    via_dense[j]
                );
            }
        }
    }

    #[test]
    fn dense_direct_and_inverse_are_mutual_inverses() {
        let mut rng = stream(63, STREAM_OPT);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6usize);
            let mut mem = SqnMemory::new(n, 4, 1.5).unwrap();
            for _ in 0..5 {
                let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if linalg::norm(&s) < 1e-6 {
                    continue;
                }
                mem.push(&s, &y, 1.0).unwrap();
            }
            let h = mem.dense_inverse_hessian();
            let b = mem.dense_hessian();
            for i in 0..n {
                let hb_row: Vec<f64> = (0..n)
                    .map(|j| (0..n).map(|k| h[i][k] * b[k][j]).sum())
                    .collect();
                for (j, v) in hb_row.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((v - target).abs() <= 1e-8, "H B [{i}][{j}] = {v}");
                }
            }
        }
    }

    #[test]
    fn freshest_pair_satisfies_secant_equation() {
        // curvature from a well-conditioned quadratic is never damped, and
        // the newest update enforces H ybar = s exactly
        let mut rng = stream(64, STREAM_OPT);
        let n = 5;
        // A = diag(1.2 .. 1.8), eigenvalues inside [1, 2]
        let diag: Vec<f64> = (0..n).map(|i| 1.2 + 0.15 * i as f64).collect();
        let mut mem = SqnMemory::new(n, 3, 0.5).unwrap();
        let mut last: Option<(Vec<f64>, Vec<f64>)> = None;
        for _ in 0..6 {
            let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = s.iter().zip(&diag).map(|(si, d)| d * si).collect();
            match mem.push(&s, &y, 1.0).unwrap() {
                PushOutcome::Stored { damped, .. } => assert!(!damped),
                PushOutcome::Skipped => panic!(),
            }
            last = Some((s, y));
        }
        let (s, y) = last.unwrap();
        let h = mem.dense_inverse_hessian();
        let hy = mat_vec(&h, &y); // undamped, so ybar = y
        for j in 0..n {
            assert!((hy[j] - s[j]).abs() <= 1e-12 * (1.0 + s[j].abs()));
        }
    }

    #[test]
    fn dimension_and_finiteness_are_enforced() {
        let mut mem = SqnMemory::new(3, 2, 1.0).unwrap();
        assert!(matches!(
            mem.push(&[1.0, 0.0], &[1.0, 0.0, 0.0], 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            mem.push(&[1.0, 0.0, 0.0], &[f64::NAN, 0.0, 0.0], 1.0),
            Err(Error::NonFinite { .. })
        ));
    }
}
