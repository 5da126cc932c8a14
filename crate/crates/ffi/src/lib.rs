//! C ABI for the solver library.
//!
//! Everything crosses the boundary through opaque handles (`ZoProblem`,
//! `ZoSet`, `ZoReport`), plain-old-data parameter structs with `_default()`
//! constructors, and `int32_t` status codes. The matching declarations live
//! in `include/zo_nsnc.h`, which is maintained by hand alongside this file;
//! `tests/abi.rs` fails if the two drift apart.
//!
//! Conventions:
//! - every function that can fail returns a status code and writes its result
//!   through an out-pointer, which is left untouched on failure;
//! - `zo_last_error_message()` returns a thread-local description of the most
//!   recent failure on the calling thread;
//! - handles are freed exactly once with the matching `zo_*_free`, and a null
//!   pointer is always safe to free.
//!
//! Safety: every function taking raw pointers is `unsafe`, under one shared
//! contract instead of a per-function section. Null handles are tolerated
//! (documented per function); any non-null pointer must be valid for the
//! declared length and type, and handles must come from this library and not
//! have been freed. Violating that is undefined behaviour, as with any C API.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use rand::{Rng, RngCore};

use zo_nsnc::geometry::ConvexSet;
use zo_nsnc::problems::{make_logistic_l1, make_min_quadratics, Noise, StochasticProblem};
use zo_nsnc::rng::{stream, STREAM_DATA};
use zo_nsnc::schedules::{BatchSchedule, StepSchedule};
use zo_nsnc::vrg::{vrg_run, Checkpoint, VrgConfig};
use zo_nsnc::vrsqn::{vrsqn_run, ColdStart, VrsqnConfig};
use zo_nsnc::Error;

pub const ZO_OK: i32 = 0;
pub const ZO_NULL_ARGUMENT: i32 = 1;
pub const ZO_INVALID_ARGUMENT: i32 = 2;
pub const ZO_DIMENSION_MISMATCH: i32 = 3;
pub const ZO_NON_FINITE: i32 = 4;
pub const ZO_RUN_FAILED: i32 = 5;
pub const ZO_BUFFER_TOO_SMALL: i32 = 6;

pub const ZO_STEP_CONSTANT: i32 = 0;
pub const ZO_STEP_DIMINISHING: i32 = 1;
pub const ZO_STEP_DECAY_SQRT: i32 = 2;
pub const ZO_STEP_DECAY_LINEAR: i32 = 3;

pub const ZO_BATCH_CONSTANT: i32 = 0;
pub const ZO_BATCH_LINEAR: i32 = 1;
pub const ZO_BATCH_SQRT: i32 = 2;
pub const ZO_BATCH_POLY: i32 = 3;
pub const ZO_BATCH_AFFINE: i32 = 4;

pub const ZO_COLD_START_SCALED: i32 = 0;
pub const ZO_COLD_START_RAW: i32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(sanitized).unwrap());
}

fn fail(code: i32, msg: &str) -> i32 {
    set_error(msg);
    code
}

fn fail_with(err: &Error) -> i32 {
    let code = match err {
        Error::DimensionMismatch { .. } => ZO_DIMENSION_MISMATCH,
        Error::InvalidArgument(_) | Error::Config(_) | Error::EmptyWindow => ZO_INVALID_ARGUMENT,
        Error::NonFinite { .. } => ZO_NON_FINITE,
        _ => ZO_RUN_FAILED,
    };
    fail(code, &err.to_string())
}

/// Returns a description of the most recent failure on this thread. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn zo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn zo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// --- problems ---------------------------------------------------------------

pub struct ZoProblem {
    inner: Box<dyn StochasticProblem>,
}

/// User-supplied objective: one noisy evaluation `f~(x, noise)`. The solver
/// calls it from the thread that invoked `zo_*_run`, never concurrently.
pub type ZoEvalFn =
    unsafe extern "C" fn(x: *const f64, n: usize, noise: f64, ctx: *mut c_void) -> f64;

struct CallbackProblem {
    n: usize,
    l0: f64,
    eval_fn: ZoEvalFn,
    ctx: *mut c_void,
}

// The run functions execute on the caller's thread and the library never
// shares a problem across threads unless the caller does; the callback
// contract in the header states the same requirement.
unsafe impl Send for CallbackProblem {}
unsafe impl Sync for CallbackProblem {}

impl StochasticProblem for CallbackProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn draw_noise(&self, rng: &mut dyn RngCore) -> Noise {
        Noise::Scalar(rng.gen::<f64>())
    }

    fn eval(&self, x: &[f64], noise: Noise) -> f64 {
        let v = match noise {
            Noise::Scalar(v) => v,
            Noise::Index(i) => i as f64,
        };
        unsafe { (self.eval_fn)(x.as_ptr(), x.len(), v, self.ctx) }
    }

    fn l0(&self) -> f64 {
        self.l0
    }
}

/// Min-of-two-quadratics benchmark in dimension `n`.
#[no_mangle]
pub unsafe extern "C" fn zo_problem_min_quadratics(n: usize, out: *mut *mut ZoProblem) -> i32 {
    if out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "out pointer is null");
    }
    if n == 0 {
        return fail(ZO_INVALID_ARGUMENT, "dimension must be at least 1");
    }
    let problem = ZoProblem {
        inner: Box::new(make_min_quadratics(n)),
    };
    unsafe { *out = Box::into_raw(Box::new(problem)) };
    ZO_OK
}

/// Synthetic l1-regularized logistic regression: `records` labeled points in
/// dimension `n` (intercept included), generated deterministically from
/// `seed`.
#[no_mangle]
pub unsafe extern "C" fn zo_problem_logistic_l1(
    n: usize,
    records: usize,
    informative_frac: f64,
    lambda: f64,
    seed: u64,
    out: *mut *mut ZoProblem,
) -> i32 {
    if out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "out pointer is null");
    }
    let mut rng = stream(seed, STREAM_DATA);
    match make_logistic_l1(n, records, informative_frac, lambda, &mut rng) {
        Ok(p) => {
            unsafe { *out = Box::into_raw(Box::new(ZoProblem { inner: Box::new(p) })) };
            ZO_OK
        }
        Err(e) => fail_with(&e),
    }
}

/// Wraps a C callback as a stochastic objective. `l0` must be a Lipschitz
/// constant of `eval(., noise)` on the feasible region, uniform over noise;
/// the solvers draw `noise` uniformly from [0, 1).
#[no_mangle]
pub unsafe extern "C" fn zo_problem_callback(
    n: usize,
    l0: f64,
    eval: Option<ZoEvalFn>,
    ctx: *mut c_void,
    out: *mut *mut ZoProblem,
) -> i32 {
    if out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "out pointer is null");
    }
    let Some(eval_fn) = eval else {
        return fail(ZO_NULL_ARGUMENT, "eval callback is null");
    };
    if n == 0 {
        return fail(ZO_INVALID_ARGUMENT, "dimension must be at least 1");
    }
    if !(l0.is_finite() && l0 > 0.0) {
        return fail(ZO_INVALID_ARGUMENT, "l0 must be finite and positive");
    }
    let problem = ZoProblem {
        inner: Box::new(CallbackProblem {
            n,
            l0,
            eval_fn,
            ctx,
        }),
    };
    unsafe { *out = Box::into_raw(Box::new(problem)) };
    ZO_OK
}

#[no_mangle]
pub unsafe extern "C" fn zo_problem_dim(problem: *const ZoProblem) -> usize {
    if problem.is_null() {
        return 0;
    }
    unsafe { &*problem }.inner.dim()
}

#[no_mangle]
pub unsafe extern "C" fn zo_problem_l0(problem: *const ZoProblem) -> f64 {
    if problem.is_null() {
        return f64::NAN;
    }
    unsafe { &*problem }.inner.l0()
}

#[no_mangle]
pub unsafe extern "C" fn zo_problem_free(problem: *mut ZoProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

// --- feasible sets ------------------------------------------------------------

pub struct ZoSet {
    inner: ConvexSet,
}

#[no_mangle]
pub unsafe extern "C" fn zo_set_whole_space(out: *mut *mut ZoSet) -> i32 {
    if out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "out pointer is null");
    }
    let set = ZoSet {
        inner: ConvexSet::whole_space(),
    };
    unsafe { *out = Box::into_raw(Box::new(set)) };
    ZO_OK
}

#[no_mangle]
pub unsafe extern "C" fn zo_set_box(
    lower: *const f64,
    upper: *const f64,
    n: usize,
    out: *mut *mut ZoSet,
) -> i32 {
    if lower.is_null() || upper.is_null() || out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "lower, upper, and out must be non-null");
    }
    if n == 0 {
        return fail(ZO_INVALID_ARGUMENT, "dimension must be at least 1");
    }
    let lo = unsafe { slice::from_raw_parts(lower, n) }.to_vec();
    let hi = unsafe { slice::from_raw_parts(upper, n) }.to_vec();
    match ConvexSet::boxed(lo, hi) {
        Ok(set) => {
            unsafe { *out = Box::into_raw(Box::new(ZoSet { inner: set })) };
            ZO_OK
        }
        Err(e) => fail_with(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn zo_set_ball(
    center: *const f64,
    n: usize,
    radius: f64,
    out: *mut *mut ZoSet,
) -> i32 {
    if center.is_null() || out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "center and out must be non-null");
    }
    if n == 0 {
        return fail(ZO_INVALID_ARGUMENT, "dimension must be at least 1");
    }
    let c = unsafe { slice::from_raw_parts(center, n) }.to_vec();
    match ConvexSet::ball(c, radius) {
        Ok(set) => {
            unsafe { *out = Box::into_raw(Box::new(ZoSet { inner: set })) };
            ZO_OK
        }
        Err(e) => fail_with(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn zo_set_free(set: *mut ZoSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

// --- parameters ---------------------------------------------------------------

/// Projected variance-reduced gradient parameters. Zero-valued `max_iters`
/// and `batch_cap` mean "no cap". See the header for field semantics.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct ZoVrgParams {
    pub eta: f64,
    pub step_kind: i32,
    pub gamma0: f64,
    pub step_c: f64,
    pub batch_kind: i32,
    pub batch_m: u64,
    pub batch_a: f64,
    pub batch_c: f64,
    pub batch_b: f64,
    pub budget: u64,
    pub lambda: f64,
    pub max_iters: u64,
    pub batch_cap: u64,
    pub metric_samples: u64,
    pub with_trace: i32,
}

#[no_mangle]
pub extern "C" fn zo_vrg_params_default() -> ZoVrgParams {
    ZoVrgParams {
        eta: 0.1,
        step_kind: ZO_STEP_CONSTANT,
        gamma0: 0.01,
        step_c: 100.0,
        batch_kind: ZO_BATCH_CONSTANT,
        batch_m: 8,
        batch_a: 0.01,
        batch_c: 1.0,
        batch_b: 0.5,
        budget: 10_000,
        lambda: 0.5,
        max_iters: 0,
        batch_cap: 0,
        metric_samples: 1000,
        with_trace: 0,
    }
}

/// Quasi-Newton parameters. A non-positive `delta` selects the conservative
/// theoretical default `l0^2 n / eta^2`.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct ZoVrsqnParams {
    pub eta: f64,
    pub step_kind: i32,
    pub gamma0: f64,
    pub step_c: f64,
    pub batch_kind: i32,
    pub batch_m: u64,
    pub batch_a: f64,
    pub batch_c: f64,
    pub batch_b: f64,
    pub budget: u64,
    pub lambda: f64,
    pub memory: u64,
    pub delta: f64,
    pub cold_start: i32,
    pub max_iters: u64,
    pub batch_cap: u64,
    pub metric_samples: u64,
    pub with_trace: i32,
}

#[no_mangle]
pub extern "C" fn zo_vrsqn_params_default() -> ZoVrsqnParams {
    ZoVrsqnParams {
        eta: 0.1,
        step_kind: ZO_STEP_CONSTANT,
        gamma0: 0.01,
        step_c: 100.0,
        batch_kind: ZO_BATCH_CONSTANT,
        batch_m: 8,
        batch_a: 0.01,
        batch_c: 1.0,
        batch_b: 0.5,
        budget: 10_000,
        lambda: 0.0,
        memory: 5,
        delta: -1.0,
        cold_start: ZO_COLD_START_SCALED,
        max_iters: 0,
        batch_cap: 0,
        metric_samples: 1000,
        with_trace: 0,
    }
}

fn step_schedule(kind: i32, gamma0: f64, c: f64) -> Result<StepSchedule, String> {
    match kind {
        ZO_STEP_CONSTANT => Ok(StepSchedule::Constant(gamma0)),
        ZO_STEP_DIMINISHING => Ok(StepSchedule::Diminishing { gamma0 }),
        ZO_STEP_DECAY_SQRT => Ok(StepSchedule::DecaySqrt { c }),
        ZO_STEP_DECAY_LINEAR => Ok(StepSchedule::DecayLinear { c }),
        other => Err(format!("unknown step kind {other}")),
    }
}

fn batch_schedule(kind: i32, m: u64, a: f64, c: f64, b: f64) -> Result<BatchSchedule, String> {
    match kind {
        ZO_BATCH_CONSTANT => Ok(BatchSchedule::Constant { m }),
        ZO_BATCH_LINEAR => Ok(BatchSchedule::Linear { a }),
        ZO_BATCH_SQRT => Ok(BatchSchedule::Sqrt { a }),
        ZO_BATCH_POLY => Ok(BatchSchedule::Poly { c, b }),
        ZO_BATCH_AFFINE => Ok(BatchSchedule::AffineTable { a }),
        other => Err(format!("unknown batch kind {other}")),
    }
}

fn optional_cap(v: u64) -> Option<u64> {
    if v == 0 {
        None
    } else {
        Some(v)
    }
}

fn x0_vec(x0: *const f64, n: usize) -> Option<Vec<f64>> {
    if x0.is_null() {
        None
    } else {
        Some(unsafe { slice::from_raw_parts(x0, n) }.to_vec())
    }
}

// --- reports --------------------------------------------------------------------

pub struct ZoReport {
    x_out: Vec<f64>,
    x_final: Vec<f64>,
    out_iter: u64,
    iters: u64,
    evals: u64,
    metric_evals: u64,
    damped: u64,
    skipped: u64,
    trace: Vec<Checkpoint>,
}

/// Runs the projected variance-reduced zeroth-order gradient method.
/// `x0` may be null for the solver's default start (the set's center).
#[no_mangle]
pub unsafe extern "C" fn zo_vrg_run(
    problem: *const ZoProblem,
    set: *const ZoSet,
    params: *const ZoVrgParams,
    x0: *const f64,
    seed: u64,
    out: *mut *mut ZoReport,
) -> i32 {
    if problem.is_null() || set.is_null() || params.is_null() || out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "problem, set, params, and out must be non-null");
    }
    let problem = unsafe { &*problem };
    let set = unsafe { &*set };
    let p = unsafe { *params };

    let step = match step_schedule(p.step_kind, p.gamma0, p.step_c) {
        Ok(s) => s,
        Err(msg) => return fail(ZO_INVALID_ARGUMENT, &msg),
    };
    let batch = match batch_schedule(p.batch_kind, p.batch_m, p.batch_a, p.batch_c, p.batch_b) {
        Ok(b) => b,
        Err(msg) => return fail(ZO_INVALID_ARGUMENT, &msg),
    };
    let config = VrgConfig {
        eta: p.eta,
        step,
        batch,
        budget: p.budget,
        lambda: p.lambda,
        max_iters: optional_cap(p.max_iters),
        x0: x0_vec(x0, problem.inner.dim()),
        batch_cap: optional_cap(p.batch_cap),
        checkpoints: p.with_trace != 0,
        metric_samples: p.metric_samples,
    };

    let run = catch_unwind(AssertUnwindSafe(|| {
        vrg_run(problem.inner.as_ref(), &set.inner, &config, seed)
    }));
    match run {
        Ok(Ok(r)) => {
            let report = ZoReport {
                x_out: r.x_out,
                x_final: r.x_final,
                out_iter: r.out_iter,
                iters: r.iters,
                evals: r.evals,
                metric_evals: r.metric_evals,
                damped: 0,
                skipped: 0,
                trace: r.trace,
            };
            unsafe { *out = Box::into_raw(Box::new(report)) };
            ZO_OK
        }
        Ok(Err(e)) => fail_with(&e),
        Err(_) => fail(ZO_RUN_FAILED, "solver panicked"),
    }
}

/// Runs the Moreau-smoothed zeroth-order quasi-Newton method.
/// `x0` may be null for the solver's default start (the set's center).
#[no_mangle]
pub unsafe extern "C" fn zo_vrsqn_run(
    problem: *const ZoProblem,
    set: *const ZoSet,
    params: *const ZoVrsqnParams,
    x0: *const f64,
    seed: u64,
    out: *mut *mut ZoReport,
) -> i32 {
    if problem.is_null() || set.is_null() || params.is_null() || out.is_null() {
        return fail(ZO_NULL_ARGUMENT, "problem, set, params, and out must be non-null");
    }
    let problem = unsafe { &*problem };
    let set = unsafe { &*set };
    let p = unsafe { *params };

    let step = match step_schedule(p.step_kind, p.gamma0, p.step_c) {
        Ok(s) => s,
        Err(msg) => return fail(ZO_INVALID_ARGUMENT, &msg),
    };
    let batch = match batch_schedule(p.batch_kind, p.batch_m, p.batch_a, p.batch_c, p.batch_b) {
        Ok(b) => b,
        Err(msg) => return fail(ZO_INVALID_ARGUMENT, &msg),
    };
    let cold_start = match p.cold_start {
        ZO_COLD_START_SCALED => ColdStart::Scaled,
        ZO_COLD_START_RAW => ColdStart::Raw,
        other => return fail(ZO_INVALID_ARGUMENT, &format!("unknown cold start {other}")),
    };
    if p.memory == 0 || p.memory > usize::MAX as u64 {
        return fail(ZO_INVALID_ARGUMENT, "memory must be at least 1");
    }
    let config = VrsqnConfig {
        eta: p.eta,
        step,
        batch,
        budget: p.budget,
        memory: p.memory as usize,
        delta: if p.delta > 0.0 { Some(p.delta) } else { None },
        cold_start,
        lambda: p.lambda,
        max_iters: optional_cap(p.max_iters),
        x0: x0_vec(x0, problem.inner.dim()),
        batch_cap: optional_cap(p.batch_cap),
        checkpoints: p.with_trace != 0,
        metric_samples: p.metric_samples,
    };

    let run = catch_unwind(AssertUnwindSafe(|| {
        vrsqn_run(problem.inner.as_ref(), &set.inner, &config, seed)
    }));
    match run {
        Ok(Ok(r)) => {
            let report = ZoReport {
                x_out: r.x_out,
                x_final: r.x_final,
                out_iter: r.out_iter,
                iters: r.iters,
                evals: r.evals,
                metric_evals: r.metric_evals,
                damped: r.damped,
                skipped: r.skipped,
                trace: r.trace,
            };
            unsafe { *out = Box::into_raw(Box::new(report)) };
            ZO_OK
        }
        Ok(Err(e)) => fail_with(&e),
        Err(_) => fail(ZO_RUN_FAILED, "solver panicked"),
    }
}

#[no_mangle]
pub unsafe extern "C" fn zo_report_dim(report: *const ZoReport) -> usize {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.x_out.len()
}

fn copy_vec(v: &[f64], buf: *mut f64, len: usize) -> i32 {
    if buf.is_null() {
        return fail(ZO_NULL_ARGUMENT, "buffer is null");
    }
    if len < v.len() {
        return fail(
            ZO_BUFFER_TOO_SMALL,
            &format!("buffer holds {len} values, {} required", v.len()),
        );
    }
    unsafe { slice::from_raw_parts_mut(buf, v.len()) }.copy_from_slice(v);
    ZO_OK
}

/// Copies the window-sampled output iterate into `buf` (`len >= dim`).
#[no_mangle]
pub unsafe extern "C" fn zo_report_x_out(report: *const ZoReport, buf: *mut f64, len: usize) -> i32 {
    if report.is_null() {
        return fail(ZO_NULL_ARGUMENT, "report is null");
    }
    copy_vec(&unsafe { &*report }.x_out, buf, len)
}

/// Copies the last iterate into `buf` (`len >= dim`).
#[no_mangle]
pub unsafe extern "C" fn zo_report_x_final(report: *const ZoReport, buf: *mut f64, len: usize) -> i32 {
    if report.is_null() {
        return fail(ZO_NULL_ARGUMENT, "report is null");
    }
    copy_vec(&unsafe { &*report }.x_final, buf, len)
}

#[no_mangle]
pub unsafe extern "C" fn zo_report_out_iter(report: *const ZoReport) -> u64 {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.out_iter
}

#[no_mangle]
pub unsafe extern "C" fn zo_report_iters(report: *const ZoReport) -> u64 {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.iters
}

/// Optimization-budget evaluations actually consumed.
#[no_mangle]
pub unsafe extern "C" fn zo_report_evals(report: *const ZoReport) -> u64 {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.evals
}

/// Extra evaluations spent on trace snapshots, never charged to the budget.
#[no_mangle]
pub unsafe extern "C" fn zo_report_metric_evals(report: *const ZoReport) -> u64 {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.metric_evals
}

/// Number of curvature pairs that needed damping (always 0 for zo_vrg_run).
#[no_mangle]
pub unsafe extern "C" fn zo_report_damped(report: *const ZoReport) -> u64 {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.damped
}

/// Number of curvature pairs skipped as numerically negligible.
#[no_mangle]
pub unsafe extern "C" fn zo_report_skipped(report: *const ZoReport) -> u64 {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.skipped
}

#[no_mangle]
pub unsafe extern "C" fn zo_report_trace_len(report: *const ZoReport) -> usize {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.trace.len()
}

/// Reads trace snapshot `index`. Any of the output pointers may be null to
/// skip that field.
#[no_mangle]
pub unsafe extern "C" fn zo_report_trace_row(
    report: *const ZoReport,
    index: usize,
    iter: *mut u64,
    evals: *mut u64,
    stationarity_sq: *mut f64,
    value: *mut f64,
    infeas: *mut f64,
) -> i32 {
    if report.is_null() {
        return fail(ZO_NULL_ARGUMENT, "report is null");
    }
    let trace = &unsafe { &*report }.trace;
    let Some(row) = trace.get(index) else {
        return fail(
            ZO_INVALID_ARGUMENT,
            &format!("trace index {index} out of range ({} rows)", trace.len()),
        );
    };
    unsafe {
        if !iter.is_null() {
            *iter = row.iter;
        }
        if !evals.is_null() {
            *evals = row.evals;
        }
        if !stationarity_sq.is_null() {
            *stationarity_sq = row.stationarity_sq;
        }
        if !value.is_null() {
            *value = row.value;
        }
        if !infeas.is_null() {
            *infeas = row.infeas;
        }
    }
    ZO_OK
}

#[no_mangle]
pub unsafe extern "C" fn zo_report_free(report: *mut ZoReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
