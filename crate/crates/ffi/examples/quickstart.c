/* Minimal end-to-end use of the C interface: build a problem and a feasible
 * box, run both solvers, and read the reports back out.
 *
 * Build (from the repository root):
 *   cargo build -p zo-nsnc-ffi
 *   cc crates/ffi/examples/quickstart.c -Icrates/ffi/include \
 *      -Ltarget/debug -lzo_nsnc_ffi -lm -o quickstart
 *   LD_LIBRARY_PATH=target/debug ./quickstart
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "zo_nsnc.h"

#define N 6

static void check(zo_status status, const char *what) {
  if (status != ZO_OK) {
    fprintf(stderr, "%s failed (%d): %s\n", what, status,
            zo_last_error_message());
    exit(1);
  }
}

/* Noise-averaged objective of the built-in piecewise quadratic:
 * ||x||^2 + 4n/3 - 2|sum(x)|, minimized at +-(1, ..., 1) with value n/3. */
static double objective(const double *x) {
  double sq = 0.0, total = 0.0;
  for (size_t i = 0; i < N; i++) {
    sq += x[i] * x[i];
    total += x[i];
  }
  return sq + 4.0 * N / 3.0 - 2.0 * fabs(total);
}

int main(void) {
  printf("zo-nsnc %s\n", zo_version());

  ZoProblem *problem = NULL;
  check(zo_problem_min_quadratics(N, &problem), "problem");

  double lower[N], upper[N];
  for (size_t i = 0; i < N; i++) {
    lower[i] = -5.0;
    upper[i] = 5.0;
  }
  ZoSet *box = NULL;
  check(zo_set_box(lower, upper, N, &box), "set");

  /* A generic start; the box center (0, ..., 0) is a symmetry point of this
   * objective where every two-point gradient estimate vanishes. */
  double x0[N] = {4.0, -3.0, 2.5, -1.5, 1.0, -0.5};
  printf("start:  objective %.4f (optimum %.4f)\n", objective(x0),
         N / 3.0);

  /* Projected variance-reduced gradient run on a 200k-evaluation budget. */
  ZoVrgParams vrg = zo_vrg_params_default();
  vrg.budget = 200000;
  vrg.batch_kind = ZO_BATCH_AFFINE;
  vrg.batch_a = 0.01;

  ZoReport *report = NULL;
  check(zo_vrg_run(problem, box, &vrg, x0, 42, &report), "vrg run");

  double x[N];
  check(zo_report_x_out(report, x, N), "x_out");
  printf("vrg:    objective %.4f after %llu iterations, %llu evaluations\n",
         objective(x), (unsigned long long)zo_report_iters(report),
         (unsigned long long)zo_report_evals(report));
  zo_report_free(report);

  /* Quasi-Newton run on the same problem, with a convergence trace. */
  ZoVrsqnParams sqn = zo_vrsqn_params_default();
  sqn.budget = 200000;
  sqn.batch_kind = ZO_BATCH_AFFINE;
  sqn.batch_a = 0.01;
  sqn.delta = 1.0; /* the conservative default damping barely moves here */
  sqn.with_trace = 1;

  report = NULL;
  check(zo_vrsqn_run(problem, box, &sqn, x0, 42, &report), "vrsqn run");
  check(zo_report_x_out(report, x, N), "x_out");

  size_t rows = zo_report_trace_len(report);
  double stat_sq = 0.0;
  check(zo_report_trace_row(report, rows - 1, NULL, NULL, &stat_sq, NULL,
                            NULL),
        "trace row");
  printf("vrsqn:  objective %.4f after %llu iterations, %llu damped pairs, "
         "residual^2 %.3e\n",
         objective(x), (unsigned long long)zo_report_iters(report),
         (unsigned long long)zo_report_damped(report), stat_sq);

  zo_report_free(report);
  zo_set_free(box);
  zo_problem_free(problem);
  return 0;
}
