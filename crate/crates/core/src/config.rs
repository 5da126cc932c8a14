//! Experiment configuration: a flat `key = value` file format, command-line
//! overrides, and construction of problems, feasible sets, and solver
//! configurations from the parsed result.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::ConvexSet;
use crate::problems::{make_logistic_l1, make_min_quadratics, LogisticL1, StochasticProblem};
use crate::rng::{stream, STREAM_DATA};
use crate::schedules::{BatchSchedule, StepSchedule};
use crate::vrsqn::ColdStart;

/// Which objective an experiment optimizes.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    MinQuad {
        n: usize,
    },
    Logistic {
        n: usize,
        records: usize,
        lambda: f64,
        informative_frac: f64,
    },
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        match *self {
            ProblemSpec::MinQuad { n } | ProblemSpec::Logistic { n, .. } => n,
        }
    }

    /// Short label used in run listings and compatibility checks.
    pub fn signature(&self) -> String {
        match self {
            ProblemSpec::MinQuad { n } => format!("minquad(n={n})"),
            ProblemSpec::Logistic {
                n,
                records,
                lambda,
                ..
            } => format!("logistic(n={n}, records={records}, lambda={lambda})"),
        }
    }
}

/// Feasible-set description, resolved to a [`ConvexSet`] once the dimension
/// is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetSpec {
    Rn,
    Box { lower: f64, upper: f64 },
    Ball { radius: f64 },
}

/// Starting-point rule. `Uniform` draws fresh per repetition from the
/// feasible set and needs a bounded set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X0Spec {
    Center,
    Uniform,
}

/// Everything needed to run one experiment, minus the algorithm choice and
/// the seed.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: ProblemSpec,
    pub set: SetSpec,
    pub eta: f64,
    pub step: StepSchedule,
    pub batch: BatchSchedule,
    pub budget: u64,
    /// Output-window fraction; `None` keeps each solver's default.
    pub lambda_window: Option<f64>,
    pub sqn_p: usize,
    pub sqn_delta: Option<f64>,
    pub cold_start: ColdStart,
    pub x0: X0Spec,
    pub batch_cap: Option<u64>,
    pub metric_samples: u64,
}

/// A training problem plus, for classification objectives, an independent
/// test set drawn from the same distribution.
pub struct BuiltProblem {
    pub train: Box<dyn StochasticProblem>,
    pub test: Option<LogisticL1>,
}

impl Experiment {
    /// Instantiate the problem. Dataset generation consumes the data stream
    /// of `base_seed` (training set first, then the test set), so every
    /// repetition of an experiment shares one dataset.
    pub fn build_problem(&self, base_seed: u64) -> Result<BuiltProblem> {
        match self.problem {
            ProblemSpec::MinQuad { n } => Ok(BuiltProblem {
                train: Box::new(make_min_quadratics(n)),
                test: None,
            }),
            ProblemSpec::Logistic {
                n,
                records,
                lambda,
                informative_frac,
            } => {
                let mut rng = stream(base_seed, STREAM_DATA);
                let train = make_logistic_l1(n, records, informative_frac, lambda, &mut rng)?;
                let test = make_logistic_l1(n, records, informative_frac, lambda, &mut rng)?;
                Ok(BuiltProblem {
                    train: Box::new(train),
                    test: Some(test),
                })
            }
        }
    }

    pub fn build_set(&self) -> Result<ConvexSet> {
        let n = self.problem.dim();
        match self.set {
            SetSpec::Rn => Ok(ConvexSet::WholeSpace),
            SetSpec::Box { lower, upper } => {
                ConvexSet::boxed(vec![lower; n], vec![upper; n])
            }
            SetSpec::Ball { radius } => ConvexSet::ball(vec![0.0; n], radius),
        }
    }

    /// Per-repetition starting point, or `None` to let the solver use the
    /// set's center.
    pub fn draw_x0(&self, rep_seed: u64) -> Result<Option<Vec<f64>>> {
        match self.x0 {
            X0Spec::Center => Ok(None),
            X0Spec::Uniform => {
                let n = self.problem.dim();
                let mut rng = stream(rep_seed, STREAM_DATA);
                match self.set {
                    SetSpec::Rn => Err(Error::invalid(
                        "x0 = uniform needs a bounded set",
                    )),
                    SetSpec::Box { lower, upper } => Ok(Some(
                        (0..n).map(|_| rng.gen_range(lower..=upper)).collect(),
                    )),
                    SetSpec::Ball { radius } => {
                        Ok(Some(crate::smoothing::draw_ball(n, radius, &mut rng)))
                    }
                }
            }
        }
    }

    pub fn vrg_config(&self, x0: Option<Vec<f64>>, checkpoints: bool) -> crate::vrg::VrgConfig {
        crate::vrg::VrgConfig {
            eta: self.eta,
            step: self.step,
            batch: self.batch,
            budget: self.budget,
            lambda: self.lambda_window.unwrap_or(0.5),
            max_iters: None,
            x0,
            batch_cap: self.batch_cap,
            checkpoints,
            metric_samples: self.metric_samples,
        }
    }

    pub fn vrsqn_config(
        &self,
        x0: Option<Vec<f64>>,
        checkpoints: bool,
    ) -> crate::vrsqn::VrsqnConfig {
        crate::vrsqn::VrsqnConfig {
            eta: self.eta,
            step: self.step,
            batch: self.batch,
            budget: self.budget,
            memory: self.sqn_p,
            delta: self.sqn_delta,
            cold_start: self.cold_start,
            lambda: self.lambda_window.unwrap_or(0.0),
            max_iters: None,
            x0,
            batch_cap: self.batch_cap,
            checkpoints,
            metric_samples: self.metric_samples,
        }
    }
}

/// Parsed `key = value` configuration text, before semantic checks.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    map: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parse configuration text: one `key = value` per line, `#` starts a
    /// comment, blank lines ignored. Duplicate keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config(format!(
                    "line {}: empty key or value",
                    lineno + 1
                )));
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Ok(RawConfig { map })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Apply one `key=value` override (from the command line); replaces any
    /// existing value.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (key, value) = kv.split_once('=').ok_or_else(|| {
            Error::Config(format!("override `{kv}` is not of the form key=value"))
        })?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("override `{kv}` has an empty side")));
        }
        self.map.insert(key, value);
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn take_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                Error::Config(format!("key `{key}`: cannot parse value `{v}`"))
            }),
        }
    }

    fn take_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.take_parsed(key)?.unwrap_or(default))
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        self.take_parsed(key)?
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    /// Resolve to an [`Experiment`], consuming all keys; anything left over
    /// is reported as unknown.
    pub fn build(mut self) -> Result<Experiment> {
        let problem_kind: String = self.require("problem")?;
        let n: usize = self.require("n")?;
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        let problem = match problem_kind.as_str() {
            "minquad" => ProblemSpec::MinQuad { n },
            "logistic" => {
                let records =
                    if let Some(r) = self.take_parsed::<usize>("s")? {
                        r
                    } else {
                        self.take_or("records", 1000)?
                    };
                ProblemSpec::Logistic {
                    n,
                    records,
                    lambda: self.take_or("lambda", 0.01)?,
                    informative_frac: self.take_or("informative_frac", 0.2)?,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown problem `{other}` (expected minquad or logistic)"
                )))
            }
        };

        let set = match self.take_or::<String>("set", "rn".into())?.as_str() {
            "rn" => SetSpec::Rn,
            "box" => SetSpec::Box {
                lower: self.require("box.lower")?,
                upper: self.require("box.upper")?,
            },
            "ball" => SetSpec::Ball {
                radius: self.require("ball.radius")?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown set `{other}` (expected rn, box, or ball)"
                )))
            }
        };

        let step = match self.take_or::<String>("step.kind", "const".into())?.as_str() {
            "const" => StepSchedule::Constant(self.take_or("step.gamma0", 0.01)?),
            "dim" => StepSchedule::Diminishing {
                gamma0: self.take_or("step.gamma0", 0.01)?,
            },
            "decay-sqrt" => StepSchedule::DecaySqrt {
                c: self.take_or("step.c", 100.0)?,
            },
            "decay-linear" => StepSchedule::DecayLinear {
                c: self.take_or("step.c", 100.0)?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown step.kind `{other}` (expected const, dim, decay-sqrt, or decay-linear)"
                )))
            }
        };

        let batch = match self.take_or::<String>("batch.kind", "affine".into())?.as_str() {
            "const" => BatchSchedule::Constant {
                m: self.take_or("batch.m", 8)?,
            },
            "linear" => BatchSchedule::Linear {
                a: self.take_or("batch.a", 0.01)?,
            },
            "sqrt" => BatchSchedule::Sqrt {
                a: self.take_or("batch.a", 0.01)?,
            },
            "poly" => BatchSchedule::Poly {
                c: self.take_or("batch.c", 1.0)?,
                b: self.take_or("batch.b", 0.5)?,
            },
            "affine" => BatchSchedule::AffineTable {
                a: self.take_or("batch.a", 0.01)?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown batch.kind `{other}` (expected const, linear, sqrt, poly, or affine)"
                )))
            }
        };

        let cold_start = match self
            .take_or::<String>("sqn.cold_start", "scaled".into())?
            .as_str()
        {
            "scaled" => ColdStart::Scaled,
            "raw" => ColdStart::Raw,
            other => {
                return Err(Error::Config(format!(
                    "unknown sqn.cold_start `{other}` (expected scaled or raw)"
                )))
            }
        };

        let x0 = match self.take_or::<String>("x0", "center".into())?.as_str() {
            "center" => X0Spec::Center,
            "uniform" => X0Spec::Uniform,
            other => {
                return Err(Error::Config(format!(
                    "unknown x0 `{other}` (expected center or uniform)"
                )))
            }
        };

        let experiment = Experiment {
            problem,
            set,
            eta: self.take_or("eta", 0.1)?,
            step,
            batch,
            budget: self.require("budget")?,
            lambda_window: self.take_parsed("lambda_window")?,
            sqn_p: self.take_or("sqn.p", 5)?,
            sqn_delta: self.take_parsed("sqn.delta")?,
            cold_start,
            x0,
            batch_cap: self.take_parsed("batch.cap")?,
            metric_samples: self.take_or("metric.samples", 1000)?,
        };

        if !self.map.is_empty() {
            let keys: Vec<&str> = self.map.keys().map(|s| s.as_str()).collect();
            return Err(Error::Config(format!(
                "unknown keys: {}",
                keys.join(", ")
            )));
        }
        if experiment.x0 == X0Spec::Uniform && experiment.set == SetSpec::Rn {
            return Err(Error::Config(
                "x0 = uniform needs a bounded set".into(),
            ));
        }
        Ok(experiment)
    }
}
