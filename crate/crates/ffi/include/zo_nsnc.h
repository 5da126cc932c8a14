/* C interface to the zo-nsnc zeroth-order solver library.
 *
 * Maintained by hand alongside crates/ffi/src/lib.rs; the Rust test suite
 * checks that the two declare the same set of symbols. Conventions:
 *
 *   - fallible functions return a zo_status and write their result through an
 *     out-pointer, which is left untouched on failure;
 *   - zo_last_error_message() describes the most recent failure on the
 *     calling thread; the pointer stays valid until the next failing call on
 *     the same thread;
 *   - handles are freed exactly once with the matching zo_*_free; freeing
 *     NULL is a no-op;
 *   - any non-NULL pointer passed in must be valid for the declared length
 *     and must not alias a handle that has already been freed.
 */
#ifndef ZO_NSNC_H
#define ZO_NSNC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t zo_status;

#define ZO_OK 0
#define ZO_NULL_ARGUMENT 1
#define ZO_INVALID_ARGUMENT 2
#define ZO_DIMENSION_MISMATCH 3
#define ZO_NON_FINITE 4
#define ZO_RUN_FAILED 5
#define ZO_BUFFER_TOO_SMALL 6

/* Step-size schedules: gamma0 (constant), gamma0/sqrt(k+1) (diminishing),
 * 1/(1 + sqrt(k+1)/c) (decay sqrt), 1/(1 + (k+1)/c) (decay linear). */
#define ZO_STEP_CONSTANT 0
#define ZO_STEP_DIMINISHING 1
#define ZO_STEP_DECAY_SQRT 2
#define ZO_STEP_DECAY_LINEAR 3

/* Sample-size schedules, with n the dimension and l0 the problem's
 * Lipschitz constant: m (constant), ceil(a sqrt(n) l0 (k+1)) (linear),
 * ceil(a sqrt(n) l0 sqrt(k+1)) (sqrt), ceil(c (k+1)^(1+b)) (poly), and
 * ceil(2 + a k) (affine). */
#define ZO_BATCH_CONSTANT 0
#define ZO_BATCH_LINEAR 1
#define ZO_BATCH_SQRT 2
#define ZO_BATCH_POLY 3
#define ZO_BATCH_AFFINE 4

/* Direction rule while the curvature-pair store warms up: scaled divides
 * the gradient estimate by the damping weight, raw uses it unscaled. */
#define ZO_COLD_START_SCALED 0
#define ZO_COLD_START_RAW 1

/* Opaque handles. */
typedef struct ZoProblem ZoProblem;
typedef struct ZoSet ZoSet;
typedef struct ZoReport ZoReport;

/* User-supplied objective: one noisy evaluation of f~(x, noise) at the n
 * coordinates in x. The solver invokes it on the thread that called
 * zo_*_run, never concurrently; noise is drawn uniformly from [0, 1). */
typedef double (*ZoEvalFn)(const double *x, size_t n, double noise,
                           void *ctx);

/* Description of the most recent failure on this thread ("" if none). */
const char *zo_last_error_message(void);

/* Library version as a static string, e.g. "0.1.0". */
const char *zo_version(void);

/* --- problems ---------------------------------------------------------- */

/* Piecewise quadratic min(||x - s 1||^2, ||x + s 1||^2) with noise
 * s ~ U[0, 2]; nonsmooth, nonconvex, minimized at +-1 with value n/3. */
zo_status zo_problem_min_quadratics(size_t n, ZoProblem **out);

/* Synthetic l1-regularized logistic regression: `records` labeled points in
 * dimension n (intercept included), generated deterministically from seed.
 * informative_frac in (0, 1] is the fraction of features that carry signal;
 * lambda >= 0 weights the l1 penalty. */
zo_status zo_problem_logistic_l1(size_t n, size_t records,
                                 double informative_frac, double lambda,
                                 uint64_t seed, ZoProblem **out);

/* Wraps a C callback as a stochastic objective. l0 must be a Lipschitz
 * constant of eval(., noise) on the feasible region, uniform over noise. */
zo_status zo_problem_callback(size_t n, double l0, ZoEvalFn eval, void *ctx,
                              ZoProblem **out);

/* Problem dimension (0 for NULL). */
size_t zo_problem_dim(const ZoProblem *problem);

/* Lipschitz constant of the objective (NaN for NULL). */
double zo_problem_l0(const ZoProblem *problem);

void zo_problem_free(ZoProblem *problem);

/* --- feasible sets ------------------------------------------------------ */

/* Unconstrained: projection is the identity. */
zo_status zo_set_whole_space(ZoSet **out);

/* Axis-aligned box [lower, upper] in dimension n; lower and upper each hold
 * n values with lower[i] <= upper[i]. */
zo_status zo_set_box(const double *lower, const double *upper, size_t n,
                     ZoSet **out);

/* Euclidean ball of positive radius around the n-dimensional center. */
zo_status zo_set_ball(const double *center, size_t n, double radius,
                      ZoSet **out);

void zo_set_free(ZoSet *set);

/* --- solver parameters --------------------------------------------------
 *
 * Shared fields:
 *   eta             smoothing radius (> 0)
 *   step_kind       one of ZO_STEP_*; gamma0 feeds the constant and
 *                   diminishing schedules, step_c the decay schedules
 *   batch_kind      one of ZO_BATCH_*; batch_m feeds the constant schedule,
 *                   batch_a the linear/sqrt/affine ones, batch_c and batch_b
 *                   the poly one
 *   budget          total function-evaluation budget (> 0)
 *   lambda          fraction of the trajectory excluded from the front of
 *                   the output window: the reported iterate is sampled from
 *                   iterations ceil(lambda K) .. K-1 (0 = full trajectory,
 *                   0.5 = last half)
 *   max_iters       hard iteration cap; 0 means none
 *   batch_cap       per-iteration sample-size cap; 0 means none
 *   metric_samples  gradient draws per trace snapshot
 *   with_trace      nonzero records convergence snapshots in the report
 */

/* Parameters for the projected variance-reduced gradient method. */
typedef struct ZoVrgParams {
  double eta;
  int32_t step_kind;
  double gamma0;
  double step_c;
  int32_t batch_kind;
  uint64_t batch_m;
  double batch_a;
  double batch_c;
  double batch_b;
  uint64_t budget;
  double lambda;
  uint64_t max_iters;
  uint64_t batch_cap;
  uint64_t metric_samples;
  int32_t with_trace;
} ZoVrgParams;

ZoVrgParams zo_vrg_params_default(void);

/* Parameters for the Moreau-smoothed quasi-Newton method. On top of the
 * shared fields: memory is the number of retained curvature pairs (>= 1),
 * delta the damping aggressiveness (a non-positive value selects the
 * conservative default l0^2 n / eta^2), cold_start one of ZO_COLD_START_*. */
typedef struct ZoVrsqnParams {
  double eta;
  int32_t step_kind;
  double gamma0;
  double step_c;
  int32_t batch_kind;
  uint64_t batch_m;
  double batch_a;
  double batch_c;
  double batch_b;
  uint64_t budget;
  double lambda;
  uint64_t memory;
  double delta;
  int32_t cold_start;
  uint64_t max_iters;
  uint64_t batch_cap;
  uint64_t metric_samples;
  int32_t with_trace;
} ZoVrsqnParams;

ZoVrsqnParams zo_vrsqn_params_default(void);

/* --- runs ---------------------------------------------------------------
 *
 * x0 may be NULL for the solver's default start (the set's center); when
 * non-NULL it must hold zo_problem_dim(problem) values inside the set.
 * On ZO_OK the caller owns *out and releases it with zo_report_free. */

zo_status zo_vrg_run(const ZoProblem *problem, const ZoSet *set,
                     const ZoVrgParams *params, const double *x0,
                     uint64_t seed, ZoReport **out);

zo_status zo_vrsqn_run(const ZoProblem *problem, const ZoSet *set,
                       const ZoVrsqnParams *params, const double *x0,
                       uint64_t seed, ZoReport **out);

/* --- reports ------------------------------------------------------------ */

/* Dimension of the iterates in the report (0 for NULL). */
size_t zo_report_dim(const ZoReport *report);

/* Copies the window-sampled output iterate into buf (len >= dim). */
zo_status zo_report_x_out(const ZoReport *report, double *buf, size_t len);

/* Copies the final iterate into buf (len >= dim). */
zo_status zo_report_x_final(const ZoReport *report, double *buf, size_t len);

/* Iteration index the output iterate was sampled at. */
uint64_t zo_report_out_iter(const ZoReport *report);

/* Iterations completed. */
uint64_t zo_report_iters(const ZoReport *report);

/* Optimization-budget function evaluations actually consumed. */
uint64_t zo_report_evals(const ZoReport *report);

/* Extra evaluations spent on trace snapshots, never charged to the budget. */
uint64_t zo_report_metric_evals(const ZoReport *report);

/* Curvature pairs that needed damping (always 0 after zo_vrg_run). */
uint64_t zo_report_damped(const ZoReport *report);

/* Curvature pairs skipped as numerically negligible. */
uint64_t zo_report_skipped(const ZoReport *report);

/* Number of recorded trace snapshots (0 unless with_trace was set). */
size_t zo_report_trace_len(const ZoReport *report);

/* Reads trace snapshot `index`. Any output pointer may be NULL to skip that
 * field. stationarity_sq is the squared norm of the projected-gradient
 * residual, value the smoothed objective estimate, infeas the distance to
 * the feasible set. */
zo_status zo_report_trace_row(const ZoReport *report, size_t index,
                              uint64_t *iter, uint64_t *evals,
                              double *stationarity_sq, double *value,
                              double *infeas);

void zo_report_free(ZoReport *report);

#ifdef __cplusplus
}
#endif

#endif /* ZO_NSNC_H */
