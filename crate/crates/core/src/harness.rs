//! Experiment harness: runs repeated seeded solves, scores the outputs
//! against exact oracles where the problem provides them, aggregates across
//! repetitions, and emits CSV. Also hosts the benchmark presets and the
//! fast invariant suite behind the `verify` command.

use std::io::{self, Write};
use std::time::Instant;

use crate::config::{Experiment, ProblemSpec, SetSpec, X0Spec};
use crate::error::{Error, Result};
use crate::geometry::{self, ConvexSet};
use crate::linalg;
use crate::problems::{ClassificationMetrics, StochasticProblem};
use crate::rng::{stream, STREAM_METRIC};
use crate::schedules::{BatchSchedule, StepSchedule};
use crate::smoothing;
use crate::vrg::{self, Checkpoint};
use crate::vrsqn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Vrg,
    Vrsqn,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Vrg => "vrg",
            Algo::Vrsqn => "vrsqn",
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vrg" => Ok(Algo::Vrg),
            "vrsqn" => Ok(Algo::Vrsqn),
            other => Err(Error::invalid(format!(
                "unknown algorithm `{other}` (expected vrg or vrsqn)"
            ))),
        }
    }
}

/// Scored result of one repetition.
#[derive(Debug, Clone)]
pub struct RepOutcome {
    pub seed: u64,
    pub algo: Algo,
    /// Stationarity score of the reported iterate: squared projected
    /// residual at unit proximal weight for the projected-gradient solver,
    /// gradient norm for the quasi-Newton one (exact oracle when available).
    pub g_r: f64,
    /// Same score at the final iterate.
    pub g_k: f64,
    /// Objective value at the final iterate.
    pub f_k: f64,
    /// Wall-clock seconds spent inside the solver.
    pub cpu_s: f64,
    /// Distance from the final iterate to the feasible set.
    pub infeas_k: f64,
    /// Damped-iteration count (quasi-Newton only).
    pub kdamp: Option<u64>,
    pub iters: u64,
    pub evals: u64,
    pub trace: Vec<Checkpoint>,
    /// Held-out classification scores at the reported iterate.
    pub test_metrics: Option<ClassificationMetrics>,
}

/// Score a solver output. Uses the exact oracle when present; otherwise
/// falls back to Monte Carlo estimates on the metric stream of `seed`.
fn stationarity(
    problem: &dyn StochasticProblem,
    set: &ConvexSet,
    x: &[f64],
    algo: Algo,
    eta: f64,
    metric_samples: u64,
    seed: u64,
) -> Result<f64> {
    if let Some(grad) = problem.exact_grad(x) {
        return Ok(match algo {
            Algo::Vrg => linalg::norm_sq(&geometry::residual(set, x, &grad, 1.0)?),
            Algo::Vrsqn => linalg::norm(&grad),
        });
    }
    let mut rng = stream(seed, STREAM_METRIC);
    Ok(match algo {
        Algo::Vrg => vrg::measure_residual(problem, set, x, eta, 1.0, metric_samples, &mut rng)?,
        Algo::Vrsqn => {
            let draws = smoothing::draw_batch(problem, eta, metric_samples, &mut rng);
            linalg::norm(&smoothing::sqn_grad(problem, set, x, eta, &draws)?)
        }
    })
}

fn objective_value(
    problem: &dyn StochasticProblem,
    x: &[f64],
    eta: f64,
    metric_samples: u64,
    seed: u64,
) -> f64 {
    problem.exact_value(x).unwrap_or_else(|| {
        let mut rng = stream(seed.wrapping_add(1), STREAM_METRIC);
        smoothing::smoothed_value(problem, x, eta, metric_samples, &mut rng)
    })
}

fn run_one(
    experiment: &Experiment,
    problem: &dyn StochasticProblem,
    test: Option<&crate::problems::LogisticL1>,
    set: &ConvexSet,
    algo: Algo,
    seed: u64,
    with_trace: bool,
) -> Result<RepOutcome> {
    let x0 = experiment.draw_x0(seed)?;
    let (x_out, x_final, iters, evals, kdamp, infeas_k, cpu_s, trace) = match algo {
        Algo::Vrg => {
            let cfg = experiment.vrg_config(x0, with_trace);
            let start = Instant::now();
            let report = vrg::vrg_run(problem, set, &cfg, seed)?;
            let cpu_s = start.elapsed().as_secs_f64();
            let infeas = geometry::infeasibility(set, &report.x_final)?;
            (
                report.x_out,
                report.x_final,
                report.iters,
                report.evals,
                None,
                infeas,
                cpu_s,
                report.trace,
            )
        }
        Algo::Vrsqn => {
            let cfg = experiment.vrsqn_config(x0, with_trace);
            let start = Instant::now();
            let report = vrsqn::vrsqn_run(problem, set, &cfg, seed)?;
            let cpu_s = start.elapsed().as_secs_f64();
            let infeas = geometry::infeasibility(set, &report.x_final)?;
            (
                report.x_out,
                report.x_final,
                report.iters,
                report.evals,
                Some(report.damped),
                infeas,
                cpu_s,
                report.trace,
            )
        }
    };
    let m = experiment.metric_samples;
    let g_r = stationarity(problem, set, &x_out, algo, experiment.eta, m, seed)?;
    let g_k = stationarity(problem, set, &x_final, algo, experiment.eta, m, seed)?;
    let f_k = objective_value(problem, &x_final, experiment.eta, m, seed);
    let test_metrics = test.map(|t| t.classification_metrics(&x_out));
    Ok(RepOutcome {
        seed,
        algo,
        g_r,
        g_k,
        f_k,
        cpu_s,
        infeas_k,
        kdamp,
        iters,
        evals,
        trace,
        test_metrics,
    })
}

/// Run `reps` seeded repetitions (seeds `base_seed .. base_seed + reps`),
/// optionally across `jobs` threads. The dataset (when the problem has one)
/// is built once from `base_seed`.
pub fn run_reps(
    experiment: &Experiment,
    algo: Algo,
    base_seed: u64,
    reps: u32,
    jobs: Option<usize>,
    with_trace: bool,
) -> Result<Vec<RepOutcome>> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    let built = experiment.build_problem(base_seed)?;
    let set = experiment.build_set()?;
    let problem: &dyn StochasticProblem = built.train.as_ref();
    let test = built.test.as_ref();

    let work = |r: u32| -> Result<RepOutcome> {
        run_one(
            experiment,
            problem,
            test,
            &set,
            algo,
            base_seed + r as u64,
            with_trace,
        )
    };

    match jobs {
        Some(1) => (0..reps).map(work).collect(),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            pool.install(|| {
                use rayon::prelude::*;
                (0..reps).into_par_iter().map(work).collect()
            })
        }
        None => {
            use rayon::prelude::*;
            (0..reps).into_par_iter().map(work).collect()
        }
    }
}

/// One emitted CSV row: per-repetition means of every score.
#[derive(Debug, Clone)]
pub struct AggregateRow {
    pub gamma_kind: String,
    pub a: f64,
    pub g_r: f64,
    pub g_k: f64,
    pub f_k: f64,
    pub cpu_s: f64,
    pub infeas_k: f64,
    pub kdamp: Option<f64>,
    pub iters: u64,
    pub evals: u64,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut count) = (0.0, 0u64);
    for v in values {
        sum += v;
        count += 1;
    }
    sum / count as f64
}

pub fn step_kind_label(step: &StepSchedule) -> &'static str {
    match step {
        StepSchedule::Constant(_) => "const",
        StepSchedule::Diminishing { .. } => "dim",
        StepSchedule::DecaySqrt { .. } => "decay-sqrt",
        StepSchedule::DecayLinear { .. } => "decay-linear",
    }
}

pub fn batch_param(batch: &BatchSchedule) -> f64 {
    match *batch {
        BatchSchedule::Constant { m } => m as f64,
        BatchSchedule::Linear { a }
        | BatchSchedule::Sqrt { a }
        | BatchSchedule::AffineTable { a } => a,
        BatchSchedule::Poly { c, .. } => c,
    }
}

pub fn aggregate(experiment: &Experiment, outcomes: &[RepOutcome]) -> AggregateRow {
    assert!(!outcomes.is_empty());
    let kdamp = if outcomes.iter().all(|o| o.kdamp.is_some()) {
        Some(mean(outcomes.iter().map(|o| o.kdamp.unwrap() as f64)))
    } else {
        None
    };
    AggregateRow {
        gamma_kind: step_kind_label(&experiment.step).to_string(),
        a: batch_param(&experiment.batch),
        g_r: mean(outcomes.iter().map(|o| o.g_r)),
        g_k: mean(outcomes.iter().map(|o| o.g_k)),
        f_k: mean(outcomes.iter().map(|o| o.f_k)),
        cpu_s: mean(outcomes.iter().map(|o| o.cpu_s)),
        infeas_k: mean(outcomes.iter().map(|o| o.infeas_k)),
        kdamp,
        iters: outcomes[0].iters,
        evals: outcomes[0].evals,
    }
}

pub const GRID_CSV_HEADER: &str =
    "gamma_kind,a,G_R,G_K,f_K,cpu_s,infeas_K,kdamp,K,evals";

/// One grid row as CSV text (no trailing newline). Floats use the shortest
/// decimal that round-trips, so reruns with the same seed produce identical
/// text outside the cpu_s column.
pub fn grid_row_string(r: &AggregateRow) -> String {
    let kdamp = r.kdamp.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.gamma_kind, r.a, r.g_r, r.g_k, r.f_k, r.cpu_s, r.infeas_k, kdamp, r.iters, r.evals
    )
}

pub fn emit_grid_csv<W: Write + ?Sized>(w: &mut W, rows: &[AggregateRow]) -> io::Result<()> {
    writeln!(w, "{GRID_CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", grid_row_string(r))?;
    }
    Ok(())
}

/// Long-format trace rows for plotting: one row per snapshot per metric.
pub fn emit_trace_csv<W: Write + ?Sized>(w: &mut W, outcomes: &[RepOutcome]) -> io::Result<()> {
    writeln!(w, "rep,iter,metric,value")?;
    for (rep, outcome) in outcomes.iter().enumerate() {
        for c in &outcome.trace {
            writeln!(w, "{rep},{},stationarity_sq,{}", c.iter, c.stationarity_sq)?;
            writeln!(w, "{rep},{},value,{}", c.iter, c.value)?;
            writeln!(w, "{rep},{},infeas,{}", c.iter, c.infeas)?;
            writeln!(w, "{rep},{},evals,{}", c.iter, c.evals)?;
        }
    }
    Ok(())
}

/// Classification-benchmark row (held-out scores at the reported iterate).
#[derive(Debug, Clone)]
pub struct AccuracyRow {
    pub n: usize,
    pub algo: Algo,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: f64,
    pub grad_r: f64,
    pub cpu_s: f64,
    pub iters: u64,
    pub evals: u64,
}

pub const ACCURACY_CSV_HEADER: &str = "n,algo,accuracy,precision,recall,grad_R,cpu_s,K,evals";

pub fn emit_accuracy_csv<W: Write + ?Sized>(w: &mut W, rows: &[AccuracyRow]) -> io::Result<()> {
    writeln!(w, "{ACCURACY_CSV_HEADER}")?;
    for r in rows {
        let precision = r.precision.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.algo.name(),
            r.accuracy,
            precision,
            r.recall,
            r.grad_r,
            r.cpu_s,
            r.iters,
            r.evals
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// benchmark presets

/// The five standard experiment grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bench {
    /// Held-out classification quality across dimensions, both solvers.
    LogisticAccuracy,
    /// Schedule grid, quasi-Newton, regularized logistic loss on a box.
    LogisticSqn,
    /// Schedule grid, projected gradient, same problem.
    LogisticVrg,
    /// Schedule grid, quasi-Newton, piecewise-quadratic benchmark on a box.
    MinquadSqn,
    /// Schedule grid, projected gradient, same problem.
    MinquadVrg,
}

impl std::str::FromStr for Bench {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "logistic-accuracy" | "4" => Ok(Bench::LogisticAccuracy),
            "logistic-sqn" | "5" => Ok(Bench::LogisticSqn),
            "logistic-vrg" | "6" => Ok(Bench::LogisticVrg),
            "minquad-sqn" | "7" => Ok(Bench::MinquadSqn),
            "minquad-vrg" | "8" => Ok(Bench::MinquadVrg),
            other => Err(Error::invalid(format!(
                "unknown benchmark `{other}` (expected logistic-accuracy, logistic-sqn, \
                 logistic-vrg, minquad-sqn, or minquad-vrg, or an index 4-8)"
            ))),
        }
    }
}

fn logistic_spec(n: usize) -> ProblemSpec {
    ProblemSpec::Logistic {
        n,
        records: 1000,
        lambda: 0.01,
        informative_frac: 0.2,
    }
}

fn grid_experiment(bench: Bench, step: StepSchedule, a: f64) -> Experiment {
    let (problem, set, budget, x0) = match bench {
        Bench::LogisticSqn | Bench::LogisticVrg => (
            logistic_spec(5),
            SetSpec::Box {
                lower: -1.0,
                upper: 1.0,
            },
            50_000u64,
            X0Spec::Center,
        ),
        Bench::MinquadSqn | Bench::MinquadVrg => (
            ProblemSpec::MinQuad { n: 12 },
            SetSpec::Box {
                lower: -5.0,
                upper: 5.0,
            },
            5_000_000u64,
            X0Spec::Uniform,
        ),
        Bench::LogisticAccuracy => unreachable!("accuracy bench is not a schedule grid"),
    };
    Experiment {
        problem,
        set,
        eta: 0.1,
        step,
        batch: BatchSchedule::AffineTable { a },
        budget,
        lambda_window: None,
        sqn_p: 5,
        sqn_delta: Some(1.0),
        cold_start: crate::vrsqn::ColdStart::Scaled,
        x0,
        batch_cap: None,
        metric_samples: 1000,
    }
}

/// The nine (step schedule, batch growth) combinations every grid table
/// sweeps.
pub fn grid_combos() -> Vec<(StepSchedule, f64)> {
    let steps = [
        StepSchedule::Constant(0.01),
        StepSchedule::DecaySqrt { c: 100.0 },
        StepSchedule::DecayLinear { c: 100.0 },
    ];
    let growth = [0.01, 0.1, 1.0];
    let mut combos = Vec::new();
    for step in steps {
        for a in growth {
            combos.push((step, a));
        }
    }
    combos
}

/// Output of a benchmark: either a schedule grid or the accuracy table.
pub enum BenchOutput {
    Grid(Vec<AggregateRow>),
    Accuracy(Vec<AccuracyRow>),
}

pub fn run_bench(
    bench: Bench,
    base_seed: u64,
    reps: u32,
    jobs: Option<usize>,
) -> Result<BenchOutput> {
    match bench {
        Bench::LogisticAccuracy => {
            let mut rows = Vec::new();
            for n in [5usize, 10, 50, 100] {
                let experiment = Experiment {
                    problem: logistic_spec(n),
                    set: SetSpec::Rn,
                    eta: 0.1,
                    step: StepSchedule::Constant(0.01),
                    batch: BatchSchedule::AffineTable { a: 0.01 },
                    budget: 50_000,
                    lambda_window: None,
                    sqn_p: 5,
                    sqn_delta: Some(1.0),
                    cold_start: crate::vrsqn::ColdStart::Scaled,
                    x0: X0Spec::Center,
                    batch_cap: None,
                    metric_samples: 1000,
                };
                for algo in [Algo::Vrsqn, Algo::Vrg] {
                    let outcomes = run_reps(&experiment, algo, base_seed, reps, jobs, false)?;
                    let metrics: Vec<&ClassificationMetrics> = outcomes
                        .iter()
                        .map(|o| {
                            o.test_metrics
                                .as_ref()
                                .expect("logistic run always has a test set")
                        })
                        .collect();
                    let defined: Vec<f64> =
                        metrics.iter().filter_map(|m| m.precision).collect();
                    let precision = if defined.is_empty() {
                        None
                    } else {
                        Some(mean(defined.into_iter()))
                    };
                    rows.push(AccuracyRow {
                        n,
                        algo,
                        accuracy: mean(metrics.iter().map(|m| m.accuracy)),
                        precision,
                        recall: mean(metrics.iter().map(|m| m.recall)),
                        grad_r: mean(outcomes.iter().map(|o| o.g_r)),
                        cpu_s: mean(outcomes.iter().map(|o| o.cpu_s)),
                        iters: outcomes[0].iters,
                        evals: outcomes[0].evals,
                    });
                }
            }
            Ok(BenchOutput::Accuracy(rows))
        }
        _ => {
            let algo = match bench {
                Bench::LogisticSqn | Bench::MinquadSqn => Algo::Vrsqn,
                _ => Algo::Vrg,
            };
            let mut rows = Vec::new();
            for (step, a) in grid_combos() {
                let experiment = grid_experiment(bench, step, a);
                let outcomes = run_reps(&experiment, algo, base_seed, reps, jobs, false)?;
                rows.push(aggregate(&experiment, &outcomes));
            }
            Ok(BenchOutput::Grid(rows))
        }
    }
}

// ---------------------------------------------------------------------
// fast invariant suite

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

/// Quick self-checks of the load-bearing invariants. Each returns pass or
/// fail with a one-line detail; the whole suite runs in seconds.
pub fn verify_suite() -> Vec<CheckResult> {
    use crate::problems::{make_linear, make_min_quadratics};
    use crate::rng::STREAM_OPT;
    use rand::Rng;

    let mut results = Vec::new();

    // sphere sampling lands exactly on the sphere
    {
        let mut rng = stream(1, STREAM_OPT);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let v = smoothing::draw_sphere(6, 0.3, &mut rng);
            worst = worst.max((linalg::norm(&v) - 0.3).abs());
        }
        results.push(check(
            "sphere_sampling_radius",
            worst <= 1e-12,
            format!("worst radius error {worst:.2e}"),
        ));
    }

    // two-point estimator is unbiased on a linear objective
    {
        let c = vec![1.0, -2.0, 0.5];
        let p = make_linear(c.clone());
        let mut rng = stream(2, STREAM_OPT);
        let m = 20_000u64;
        let mut mean_vec = vec![0.0; 3];
        for _ in 0..m {
            let draws = smoothing::draw_batch(&p, 0.1, 1, &mut rng);
            let g = smoothing::pair_estimate(&p, &[0.3, 0.0, -0.7], &draws[0]).unwrap();
            linalg::axpy(1.0 / m as f64, &g, &mut mean_vec);
        }
        let err = linalg::dist(&mean_vec, &c);
        // standard error of the mean norm is about 0.025 here
        results.push(check(
            "estimator_unbiased_linear",
            err <= 0.15,
            format!("|mean - grad| = {err:.3}"),
        ));
    }

    // two-loop application agrees with the dense reconstruction
    {
        let mut rng = stream(3, STREAM_OPT);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=8usize);
            let mut mem = crate::sqn_core::SqnMemory::new(n, rng.gen_range(1..=5), 1.0).unwrap();
            for _ in 0..rng.gen_range(0..=6) {
                let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if linalg::norm(&s) > 1e-6 {
                    mem.push(&s, &y, 1.0).unwrap();
                }
            }
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fast = mem.apply(&g);
            let h = mem.dense_inverse_hessian();
            for i in 0..n {
                let dense_i: f64 = linalg::dot(&h[i], &g);
                worst = worst.max((fast[i] - dense_i).abs());
            }
        }
        results.push(check(
            "two_loop_matches_dense",
            worst <= 1e-10,
            format!("worst difference {worst:.2e}"),
        ));
    }

    // splitting the residual against an estimate error keeps the bound
    {
        let mut rng = stream(4, STREAM_OPT);
        let mut violations = 0u32;
        for _ in 0..1000 {
            let n = rng.gen_range(1..=6usize);
            let set = ConvexSet::symmetric_box(n, rng.gen_range(0.5..3.0)).unwrap();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let e: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let beta = rng.gen_range(0.1..10.0);
            let noisy: Vec<f64> = g.iter().zip(&e).map(|(a, b)| a + b).collect();
            let exact = geometry::residual(&set, &x, &g, beta).unwrap();
            let est = geometry::residual(&set, &x, &noisy, beta).unwrap();
            let lhs = linalg::norm_sq(&exact);
            let rhs = 2.0 * linalg::norm_sq(&est) + 2.0 * linalg::norm_sq(&e);
            if lhs > rhs * (1.0 + 1e-12) {
                violations += 1;
            }
        }
        results.push(check(
            "residual_error_split",
            violations == 0,
            format!("{violations} violations in 1000 trials"),
        ));
    }

    // residual norm is nondecreasing in the proximal weight
    {
        let mut rng = stream(5, STREAM_OPT);
        let mut violations = 0u32;
        for _ in 0..1000 {
            let n = rng.gen_range(1..=6usize);
            let set = ConvexSet::symmetric_box(n, rng.gen_range(0.5..3.0)).unwrap();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b1 = rng.gen_range(0.1..5.0);
            let b2 = b1 * rng.gen_range(1.0..4.0);
            let r1 = linalg::norm(&geometry::residual(&set, &x, &g, b1).unwrap());
            let r2 = linalg::norm(&geometry::residual(&set, &x, &g, b2).unwrap());
            if r2 < r1 * (1.0 - 1e-12) {
                violations += 1;
            }
        }
        results.push(check(
            "residual_monotone_in_weight",
            violations == 0,
            format!("{violations} violations in 1000 trials"),
        ));
    }

    // every accepted curvature pair respects the damping floor
    {
        struct FloorProbe {
            violations: u32,
            stored: u32,
        }
        impl vrsqn::SqnProbe for FloorProbe {
            fn on_pair(
                &mut self,
                _k: u64,
                s: &[f64],
                _y: &[f64],
                outcome: &crate::sqn_core::PushOutcome,
            ) {
                if let crate::sqn_core::PushOutcome::Stored { s_ybar, nu_next, .. } = *outcome {
                    self.stored += 1;
                    let floor = 0.25 * nu_next * linalg::norm_sq(s);
                    if s_ybar < floor * (1.0 - 1e-12) {
                        self.violations += 1;
                    }
                }
            }
        }
        let p = make_min_quadratics(3);
        let set = ConvexSet::symmetric_box(3, 5.0).unwrap();
        let cfg = vrsqn::VrsqnConfig {
            delta: Some(1.0),
            budget: 4_000,
            x0: Some(vec![2.0, -3.0, 1.0]),
            ..vrsqn::VrsqnConfig::default()
        };
        let mut probe = FloorProbe {
            violations: 0,
            stored: 0,
        };
        let run = vrsqn::vrsqn_run_probed(&p, &set, &cfg, 6, &mut probe);
        results.push(check(
            "curvature_damping_floor",
            run.is_ok() && probe.violations == 0 && probe.stored > 0,
            format!("{} pairs stored, {} below floor", probe.stored, probe.violations),
        ));
    }

    // same seed, same trajectory
    {
        let p = make_min_quadratics(2);
        let set = ConvexSet::symmetric_box(2, 5.0).unwrap();
        let cfg = vrg::VrgConfig {
            budget: 2_000,
            ..vrg::VrgConfig::default()
        };
        let a = vrg::vrg_run(&p, &set, &cfg, 7).unwrap();
        let b = vrg::vrg_run(&p, &set, &cfg, 7).unwrap();
        results.push(check(
            "determinism",
            a.x_final == b.x_final && a.x_out == b.x_out,
            "identical outputs across reruns".to_string(),
        ));
    }

    // evaluation accounting stays within budget for both solvers
    {
        let p = make_min_quadratics(3);
        let set = ConvexSet::symmetric_box(3, 5.0).unwrap();
        let vcfg = vrg::VrgConfig {
            batch: BatchSchedule::AffineTable { a: 0.5 },
            budget: 5_000,
            ..vrg::VrgConfig::default()
        };
        let v = vrg::vrg_run(&p, &set, &vcfg, 8).unwrap();
        let scfg = vrsqn::VrsqnConfig {
            batch: BatchSchedule::AffineTable { a: 0.5 },
            budget: 5_000,
            delta: Some(1.0),
            ..vrsqn::VrsqnConfig::default()
        };
        let s = vrsqn::vrsqn_run(&p, &set, &scfg, 8).unwrap();
        let ok = v.evals <= 5_000 && s.evals <= 5_000 && v.evals > 4_000 && s.evals > 4_000;
        results.push(check(
            "budget_accounting",
            ok,
            format!("projected {} evals, quasi-Newton {} evals of 5000", v.evals, s.evals),
        ));
    }

    // the Moreau-penalized iteration keeps infeasibility under its ceiling
    {
        let p = make_linear(vec![1.0, 1.0]);
        let set = ConvexSet::symmetric_box(2, 1.0).unwrap();
        let cfg = vrsqn::VrsqnConfig {
            step: StepSchedule::Constant(0.05),
            budget: 10_000,
            delta: Some(1.0),
            ..vrsqn::VrsqnConfig::default()
        };
        let run = vrsqn::vrsqn_run(&p, &set, &cfg, 9).unwrap();
        let infeas = geometry::infeasibility(&set, &run.x_final).unwrap();
        let bound = vrsqn::infeasibility_bound(2, p.l0(), cfg.eta, 1.0);
        results.push(check(
            "infeasibility_ceiling",
            infeas <= bound,
            format!("final infeasibility {infeas:.3} vs ceiling {bound:.3}"),
        ));
    }

    results
}
