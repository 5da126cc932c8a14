//! Benchmark objectives: noisy zeroth-order oracles with known Lipschitz
//! constants, plus exact values and subgradient selections where a closed
//! form exists (used only for reporting, never by the solvers).

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;

/// One realization of the oracle noise. `Scalar` carries a sampled parameter,
/// `Index` picks a record out of a finite dataset. Solvers treat it as opaque:
/// they draw it, possibly hold it for reuse, and hand it back to `eval`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    Scalar(f64),
    Index(usize),
}

/// A stochastic objective accessed only through noisy function values.
///
/// `eval(x, noise)` returns one sample whose expectation over `draw_noise` is
/// the true objective. The solvers rely on evaluating the *same* noise at
/// several points, so the draw is split from the evaluation.
pub trait StochasticProblem: Send + Sync {
    fn dim(&self) -> usize;

    /// Draw one noise realization.
    fn draw_noise(&self, rng: &mut dyn RngCore) -> Noise;

    /// One noisy function value at `x` under the given realization.
    fn eval(&self, x: &[f64], noise: Noise) -> f64;

    /// Lipschitz constant of `eval(., noise)` valid on the problem's domain,
    /// uniform over realizations.
    fn l0(&self) -> f64;

    /// Exact objective value, when a closed form (or the full finite sum) is
    /// available. Reporting only.
    fn exact_value(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// An exact subgradient selection, when available. Reporting only.
    fn exact_grad(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

/// Pointwise minimum of two shifted quadratics with a shared uniform shift:
///
/// ```text
/// f~(x, s) = min( sum_i (x_i - s)^2 , sum_i (x_i + s)^2 ),   s ~ U[0, 2].
/// ```
///
/// The expectation has the closed form `||x||^2 + 4n/3 - 2|sum_i x_i|`, a
/// nonsmooth nonconvex function whose global minimum `n/3` sits at the two
/// points `(1,...,1)` and `(-1,...,-1)`.
#[derive(Debug, Clone)]
pub struct MinQuadratics {
    n: usize,
    l0: f64,
}

/// Min-of-two-quadratics benchmark in dimension `n`. The stored Lipschitz
/// constant `14 sqrt(n)` is valid on the cube `|x_i| <= 5` the experiments
/// run on.
pub fn make_min_quadratics(n: usize) -> MinQuadratics {
    assert!(n >= 1, "dimension must be positive");
    MinQuadratics {
        n,
        l0: 14.0 * (n as f64).sqrt(),
    }
}

impl MinQuadratics {
    /// Global minimum value, `n/3`, attained at `(1,..,1)` and `(-1,..,-1)`.
    pub fn optimal_value(&self) -> f64 {
        self.n as f64 / 3.0
    }
}

impl StochasticProblem for MinQuadratics {
    fn dim(&self) -> usize {
        self.n
    }

    fn draw_noise(&self, rng: &mut dyn RngCore) -> Noise {
        Noise::Scalar(rng.gen_range(0.0..2.0))
    }

    fn eval(&self, x: &[f64], noise: Noise) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        let s = match noise {
            Noise::Scalar(s) => s,
            Noise::Index(_) => unreachable!("min-quadratics noise is a scalar shift"),
        };
        let (mut minus, mut plus) = (0.0, 0.0);
        for xi in x {
            minus += (xi - s) * (xi - s);
            plus += (xi + s) * (xi + s);
        }
        minus.min(plus)
    }

    fn l0(&self) -> f64 {
        self.l0
    }

    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        debug_assert_eq!(x.len(), self.n);
        let s: f64 = x.iter().sum();
        Some(linalg::norm_sq(x) + 4.0 * self.n as f64 / 3.0 - 2.0 * s.abs())
    }

    fn exact_grad(&self, x: &[f64]) -> Option<Vec<f64>> {
        debug_assert_eq!(x.len(), self.n);
        let s: f64 = x.iter().sum();
        let sgn = if s > 0.0 {
            1.0
        } else if s < 0.0 {
            -1.0
        } else {
            0.0
        };
        Some(x.iter().map(|xi| 2.0 * xi - 2.0 * sgn).collect())
    }
}

/// L1-regularized logistic regression over a generated dataset.
///
/// The decision variable is `x = (w, w0)` with the intercept last. Each record
/// contributes `softplus(m) - y m + lambda ||w||_1` with margin
/// `m = w'z + w0`; noise draws pick a record uniformly at random.
///
/// Records are generated once at construction: labels are balanced, the first
/// `ceil(0.2 (n-1))` features are informative (normal with mean `+2` for the
/// positive class and `-2` for the negative, unit variance) and the rest are
/// standard normal noise.
#[derive(Debug, Clone)]
pub struct LogisticL1 {
    features: Vec<Vec<f64>>,
    labels: Vec<f64>,
    lambda: f64,
    l0: f64,
}

/// Generate an `n`-dimensional (features plus intercept) logistic-L1 instance
/// with the given number of records, consuming the supplied RNG.
/// `informative_frac` is the fraction of the `n - 1` features that carry
/// class signal (count rounded up).
pub fn make_logistic_l1(
    n: usize,
    records: usize,
    informative_frac: f64,
    lambda: f64,
    rng: &mut dyn RngCore,
) -> Result<LogisticL1> {
    if n < 2 {
        return Err(Error::invalid(
            "logistic-l1 needs at least one feature plus the intercept",
        ));
    }
    if records < 2 {
        return Err(Error::invalid("logistic-l1 needs at least two records"));
    }
    if !(informative_frac > 0.0 && informative_frac <= 1.0) {
        return Err(Error::invalid("informative fraction must be in (0, 1]"));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("l1 weight must be finite and nonnegative"));
    }
    let d = n - 1;
    let informative = (informative_frac * d as f64).ceil() as usize;

    let mut labels: Vec<f64> = (0..records)
        .map(|i| if i < records / 2 { 1.0 } else { 0.0 })
        .collect();
    labels.shuffle(rng);

    let mut features = Vec::with_capacity(records);
    let mut max_feature_norm: f64 = 0.0;
    for &y in &labels {
        let mu = if y > 0.5 { 2.0 } else { -2.0 };
        let z: Vec<f64> = (0..d)
            .map(|j| {
                let g: f64 = rng.sample(StandardNormal);
                if j < informative {
                    mu + g
                } else {
                    g
                }
            })
            .collect();
        max_feature_norm = max_feature_norm.max(linalg::norm(&z));
        features.push(z);
    }

    // Per-record gradient norm is at most ||(z,1)|| for the loss part plus
    // lambda sqrt(d) for the regularizer.
    let l0 = max_feature_norm + 1.0 + lambda * (d as f64).sqrt();

    Ok(LogisticL1 {
        features,
        labels,
        lambda,
        l0,
    })
}

fn softplus(m: f64) -> f64 {
    if m > 0.0 {
        m + (-m).exp().ln_1p()
    } else {
        m.exp().ln_1p()
    }
}

fn sigmoid(m: f64) -> f64 {
    if m >= 0.0 {
        1.0 / (1.0 + (-m).exp())
    } else {
        let e = m.exp();
        e / (1.0 + e)
    }
}

impl LogisticL1 {
    pub fn records(&self) -> usize {
        self.labels.len()
    }

    pub fn feature(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    /// Classifier margin `w'z_i + w0` of record `i` at parameters `x`.
    pub fn margin(&self, x: &[f64], i: usize) -> f64 {
        let (w, w0) = x.split_at(x.len() - 1);
        linalg::dot(w, &self.features[i]) + w0[0]
    }

    /// Write the dataset as CSV with header `z_1,...,z_{n-1},y`.
    pub fn to_csv(&self, out: &mut dyn std::io::Write) -> Result<()> {
        let d = self.features[0].len();
        let header: Vec<String> = (1..=d)
            .map(|j| format!("z_{j}"))
            .chain(std::iter::once("y".to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for (z, y) in self.features.iter().zip(&self.labels) {
            for zj in z {
                write!(out, "{zj},")?;
            }
            writeln!(out, "{}", *y as u8)?;
        }
        Ok(())
    }

    /// Read a dataset written by [`to_csv`](Self::to_csv) and rebuild the
    /// problem with the given L1 weight.
    pub fn from_csv(input: &mut dyn std::io::Read, lambda: f64) -> Result<LogisticL1> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::invalid("empty dataset file"))?;
        let d = header.split(',').count() - 1;
        if d == 0 || !header.ends_with(",y") {
            return Err(Error::invalid("dataset header must be z_1,...,z_d,y"));
        }
        let mut features = Vec::new();
        let mut labels = Vec::new();
        let mut max_feature_norm: f64 = 0.0;
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != d + 1 {
                return Err(Error::invalid(format!(
                    "dataset row {} has {} fields, expected {}",
                    lineno + 2,
                    fields.len(),
                    d + 1
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("bad number {s:?} in dataset row")))
            };
            let z = fields[..d].iter().map(|s| parse(s)).collect::<Result<Vec<f64>>>()?;
            let y = parse(fields[d])?;
            if y != 0.0 && y != 1.0 {
                return Err(Error::invalid("labels must be 0 or 1"));
            }
            max_feature_norm = max_feature_norm.max(linalg::norm(&z));
            features.push(z);
            labels.push(y);
        }
        if features.len() < 2 {
            return Err(Error::invalid("logistic-l1 needs at least two records"));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::invalid("l1 weight must be finite and nonnegative"));
        }
        let l0 = max_feature_norm + 1.0 + lambda * (d as f64).sqrt();
        Ok(LogisticL1 {
            features,
            labels,
            lambda,
            l0,
        })
    }

    /// Accuracy, precision and recall of the margin-sign classifier
    /// (threshold `sigma(m) >= 0.5`, i.e. `m >= 0`). Precision is `None` when
    /// nothing is classified positive rather than a misleading zero.
    pub fn classification_metrics(&self, x: &[f64]) -> ClassificationMetrics {
        let (mut tp, mut fp, mut fn_, mut tn) = (0usize, 0usize, 0usize, 0usize);
        for i in 0..self.records() {
            let predicted = self.margin(x, i) >= 0.0;
            let actual = self.labels[i] > 0.5;
            match (predicted, actual) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => tn += 1,
            }
        }
        ClassificationMetrics {
            accuracy: (tp + tn) as f64 / self.records() as f64,
            precision: (tp + fp > 0).then(|| tp as f64 / (tp + fp) as f64),
            recall: tp as f64 / (tp + fn_).max(1) as f64,
        }
    }

    /// Fraction of records whose sign of the margin matches the label.
    pub fn accuracy(&self, x: &[f64]) -> f64 {
        self.classification_metrics(x).accuracy
    }

    /// Fraction of positive records classified positive.
    pub fn recall(&self, x: &[f64]) -> f64 {
        self.classification_metrics(x).recall
    }
}

/// Threshold-0.5 classifier quality on one dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    /// `None` when the classifier predicts no positives at all.
    pub precision: Option<f64>,
    pub recall: f64,
}

impl StochasticProblem for LogisticL1 {
    fn dim(&self) -> usize {
        self.features[0].len() + 1
    }

    fn draw_noise(&self, rng: &mut dyn RngCore) -> Noise {
        Noise::Index(rng.gen_range(0..self.records()))
    }

    fn eval(&self, x: &[f64], noise: Noise) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let i = match noise {
            Noise::Index(i) => i,
            Noise::Scalar(_) => unreachable!("logistic-l1 noise is a record index"),
        };
        let m = self.margin(x, i);
        let (w, _) = x.split_at(x.len() - 1);
        let l1: f64 = w.iter().map(|wi| wi.abs()).sum();
        softplus(m) - self.labels[i] * m + self.lambda * l1
    }

    fn l0(&self) -> f64 {
        self.l0
    }

    /// Full-dataset objective (the finite sum is the exact expectation).
    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        let loss: f64 = (0..self.records())
            .map(|i| {
                let m = self.margin(x, i);
                softplus(m) - self.labels[i] * m
            })
            .sum::<f64>()
            / self.records() as f64;
        let (w, _) = x.split_at(x.len() - 1);
        let l1: f64 = w.iter().map(|wi| wi.abs()).sum();
        Some(loss + self.lambda * l1)
    }

    fn exact_grad(&self, x: &[f64]) -> Option<Vec<f64>> {
        let d = x.len() - 1;
        let mut g = vec![0.0; x.len()];
        for i in 0..self.records() {
            let r = sigmoid(self.margin(x, i)) - self.labels[i];
            linalg::axpy(r, &self.features[i], &mut g[..d]);
            g[d] += r;
        }
        let inv = 1.0 / self.records() as f64;
        linalg::scale(&mut g, inv);
        for (gj, wj) in g[..d].iter_mut().zip(x) {
            *gj += self.lambda
                * if *wj > 0.0 {
                    1.0
                } else if *wj < 0.0 {
                    -1.0
                } else {
                    0.0
                };
        }
        Some(g)
    }
}

/// Noiseless linear objective `f(x) = c'x`: the canonical unbiasedness test
/// case (the smoothed gradient equals `c` exactly).
#[derive(Debug, Clone)]
pub struct LinearProblem {
    c: Vec<f64>,
    l0: f64,
}

pub fn make_linear(c: Vec<f64>) -> LinearProblem {
    assert!(!c.is_empty(), "dimension must be positive");
    let l0 = linalg::norm(&c);
    LinearProblem { c, l0 }
}

impl StochasticProblem for LinearProblem {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn draw_noise(&self, _rng: &mut dyn RngCore) -> Noise {
        Noise::Scalar(0.0)
    }

    fn eval(&self, x: &[f64], _noise: Noise) -> f64 {
        linalg::dot(&self.c, x)
    }

    fn l0(&self) -> f64 {
        self.l0
    }

    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        Some(linalg::dot(&self.c, x))
    }

    fn exact_grad(&self, _x: &[f64]) -> Option<Vec<f64>> {
        Some(self.c.clone())
    }
}

/// Noiseless `f(x) = l0 ||x||`: exactly `l0`-Lipschitz everywhere, the
/// extremal case for the estimator moment bounds.
#[derive(Debug, Clone)]
pub struct ScaledNormProblem {
    n: usize,
    l0: f64,
}

pub fn make_scaled_norm(n: usize, l0: f64) -> ScaledNormProblem {
    assert!(n >= 1 && l0 > 0.0, "need positive dimension and scale");
    ScaledNormProblem { n, l0 }
}

impl StochasticProblem for ScaledNormProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn draw_noise(&self, _rng: &mut dyn RngCore) -> Noise {
        Noise::Scalar(0.0)
    }

    fn eval(&self, x: &[f64], _noise: Noise) -> f64 {
        self.l0 * linalg::norm(x)
    }

    fn l0(&self) -> f64 {
        self.l0
    }

    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        Some(self.l0 * linalg::norm(x))
    }

    fn exact_grad(&self, x: &[f64]) -> Option<Vec<f64>> {
        let r = linalg::norm(x);
        if r == 0.0 {
            return None; // nondifferentiable at the origin
        }
        Some(x.iter().map(|xi| self.l0 * xi / r).collect())
    }
}
