//! Drives the C ABI the way a foreign caller would: out-pointer
//! constructors, status codes, report getters, and the error paths. The last
//! test keeps the hand-written header in sync with the exported symbols.

use std::collections::BTreeMap;
use std::ffi::{c_void, CStr};
use std::ptr;

use zo_nsnc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(zo_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn version_matches_package_and_error_starts_empty() {
    let version = unsafe { CStr::from_ptr(zo_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
    // Thread-local error slot starts out empty on a fresh thread.
    assert_eq!(last_error(), "");
}

#[test]
fn solver_round_trip_reports_consistent_accounting() {
    unsafe {
        let mut problem: *mut ZoProblem = ptr::null_mut();
        assert_eq!(zo_problem_min_quadratics(6, &mut problem), ZO_OK);
        assert_eq!(zo_problem_dim(problem), 6);
        assert!(zo_problem_l0(problem) > 0.0);

        let lower = [-5.0; 6];
        let upper = [5.0; 6];
        let mut set: *mut ZoSet = ptr::null_mut();
        assert_eq!(
            zo_set_box(lower.as_ptr(), upper.as_ptr(), 6, &mut set),
            ZO_OK
        );

        let mut params = zo_vrg_params_default();
        params.budget = 40_000;
        params.with_trace = 1;
        params.metric_samples = 100;

        let mut report: *mut ZoReport = ptr::null_mut();
        assert_eq!(
            zo_vrg_run(problem, set, &params, ptr::null(), 7, &mut report),
            ZO_OK
        );
        assert_eq!(zo_report_dim(report), 6);

        let mut x_out = [0.0; 6];
        let mut x_final = [0.0; 6];
        assert_eq!(zo_report_x_out(report, x_out.as_mut_ptr(), 6), ZO_OK);
        assert_eq!(zo_report_x_final(report, x_final.as_mut_ptr(), 6), ZO_OK);
        assert!(x_out.iter().all(|v| v.is_finite() && v.abs() <= 5.0));
        assert!(x_final.iter().all(|v| v.is_finite() && v.abs() <= 5.0));

        let iters = zo_report_iters(report);
        assert!(iters > 0);
        assert!(zo_report_out_iter(report) < iters);
        let evals = zo_report_evals(report);
        assert!(evals > 0 && evals <= params.budget);
        // The gradient method never touches the curvature store.
        assert_eq!(zo_report_damped(report), 0);
        assert_eq!(zo_report_skipped(report), 0);

        let rows = zo_report_trace_len(report);
        assert!(rows > 1);
        let mut prev_evals = 0u64;
        for index in 0..rows {
            let mut iter = 0u64;
            let mut row_evals = 0u64;
            let mut stat_sq = f64::NAN;
            let mut value = f64::NAN;
            let mut infeas = f64::NAN;
            assert_eq!(
                zo_report_trace_row(
                    report,
                    index,
                    &mut iter,
                    &mut row_evals,
                    &mut stat_sq,
                    &mut value,
                    &mut infeas,
                ),
                ZO_OK
            );
            assert!(row_evals >= prev_evals);
            prev_evals = row_evals;
            assert!(stat_sq.is_finite() && stat_sq >= 0.0);
            assert!(value.is_finite());
            assert!(infeas.is_finite() && infeas >= 0.0);
        }
        assert!(zo_report_metric_evals(report) > 0);

        // Same seed, same iterate, bit for bit.
        let mut rerun: *mut ZoReport = ptr::null_mut();
        assert_eq!(
            zo_vrg_run(problem, set, &params, ptr::null(), 7, &mut rerun),
            ZO_OK
        );
        let mut x_out2 = [0.0; 6];
        assert_eq!(zo_report_x_out(rerun, x_out2.as_mut_ptr(), 6), ZO_OK);
        assert_eq!(x_out.map(f64::to_bits), x_out2.map(f64::to_bits));
        zo_report_free(rerun);
        zo_report_free(report);

        // Quasi-Newton over the same handles.
        let mut sqn = zo_vrsqn_params_default();
        sqn.budget = 40_000;
        let mut qn_report: *mut ZoReport = ptr::null_mut();
        assert_eq!(
            zo_vrsqn_run(problem, set, &sqn, ptr::null(), 7, &mut qn_report),
            ZO_OK
        );
        assert_eq!(zo_report_dim(qn_report), 6);
        assert!(zo_report_iters(qn_report) > 0);
        assert!(zo_report_evals(qn_report) <= sqn.budget);
        // No trace requested, so no metric spending and no rows.
        assert_eq!(zo_report_trace_len(qn_report), 0);
        assert_eq!(zo_report_metric_evals(qn_report), 0);
        zo_report_free(qn_report);

        zo_set_free(set);
        zo_problem_free(problem);
    }
}

/// Same objective as the built-in piecewise quadratic, implemented through
/// the callback interface; `ctx` counts evaluations.
unsafe extern "C" fn counted_min_quadratics(
    x: *const f64,
    n: usize,
    noise: f64,
    ctx: *mut c_void,
) -> f64 {
    *(ctx as *mut u64) += 1;
    let x = std::slice::from_raw_parts(x, n);
    let s = 2.0 * noise;
    let plus: f64 = x.iter().map(|v| (v - s) * (v - s)).sum();
    let minus: f64 = x.iter().map(|v| (v + s) * (v + s)).sum();
    plus.min(minus)
}

/// Noise-averaged objective value: E_s min(||x - s1||^2, ||x + s1||^2) with
/// s ~ U[0, 2] equals ||x||^2 + 4n/3 - 2|sum(x)|.
fn exact_value(x: &[f64]) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let total: f64 = x.iter().sum();
    sq + 4.0 * x.len() as f64 / 3.0 - 2.0 * total.abs()
}

#[test]
fn callback_problem_round_trips_ctx_and_counts_every_evaluation() {
    unsafe {
        let mut calls: u64 = 0;
        let mut problem: *mut ZoProblem = ptr::null_mut();
        assert_eq!(
            zo_problem_callback(
                3,
                30.0,
                Some(counted_min_quadratics),
                &mut calls as *mut u64 as *mut c_void,
                &mut problem,
            ),
            ZO_OK
        );
        assert_eq!(zo_problem_dim(problem), 3);
        assert_eq!(zo_problem_l0(problem), 30.0);

        let lower = [-5.0; 3];
        let upper = [5.0; 3];
        let mut set: *mut ZoSet = ptr::null_mut();
        assert_eq!(
            zo_set_box(lower.as_ptr(), upper.as_ptr(), 3, &mut set),
            ZO_OK
        );

        let mut params = zo_vrg_params_default();
        params.budget = 30_000;
        params.batch_kind = ZO_BATCH_AFFINE;
        params.batch_a = 0.01;

        let x0 = [4.0, -3.0, 2.0];
        let mut report: *mut ZoReport = ptr::null_mut();
        assert_eq!(
            zo_vrg_run(problem, set, &params, x0.as_ptr(), 11, &mut report),
            ZO_OK
        );

        // Every objective call went through the callback, and nothing else
        // did: budgeted evaluations plus metric snapshots exactly.
        let expected = zo_report_evals(report) + zo_report_metric_evals(report);
        assert_eq!(calls, expected);

        let mut x_final = [0.0; 3];
        assert_eq!(zo_report_x_final(report, x_final.as_mut_ptr(), 3), ZO_OK);
        assert!(
            exact_value(&x_final) < 0.5 * exact_value(&x0),
            "no progress: {} -> {}",
            exact_value(&x0),
            exact_value(&x_final)
        );

        zo_report_free(report);
        zo_set_free(set);
        zo_problem_free(problem);
    }
}

#[test]
fn failures_return_codes_and_set_the_thread_message() {
    unsafe {
        let mut problem: *mut ZoProblem = ptr::null_mut();

        assert_eq!(
            zo_problem_min_quadratics(0, &mut problem),
            ZO_INVALID_ARGUMENT
        );
        assert!(last_error().contains("dimension"));
        assert_eq!(
            zo_problem_min_quadratics(5, ptr::null_mut()),
            ZO_NULL_ARGUMENT
        );
        assert_eq!(
            zo_problem_callback(3, 1.0, None, ptr::null_mut(), &mut problem),
            ZO_NULL_ARGUMENT
        );
        assert_eq!(
            zo_problem_logistic_l1(5, 100, 0.0, 0.01, 1, &mut problem),
            ZO_INVALID_ARGUMENT
        );
        assert!(problem.is_null(), "out must stay untouched on failure");

        // Inverted box bounds and a degenerate ball.
        let lo = [1.0, 1.0];
        let hi = [0.0, 2.0];
        let mut set: *mut ZoSet = ptr::null_mut();
        assert_eq!(
            zo_set_box(lo.as_ptr(), hi.as_ptr(), 2, &mut set),
            ZO_INVALID_ARGUMENT
        );
        assert_eq!(
            zo_set_ball(lo.as_ptr(), 2, 0.0, &mut set),
            ZO_INVALID_ARGUMENT
        );
        assert!(set.is_null());

        // A valid problem/set pair for probing the run-time failures.
        assert_eq!(zo_problem_min_quadratics(2, &mut problem), ZO_OK);
        let center = [0.0, 0.0];
        assert_eq!(zo_set_ball(center.as_ptr(), 2, 3.0, &mut set), ZO_OK);

        let mut report: *mut ZoReport = ptr::null_mut();
        let defaults = zo_vrg_params_default();
        assert_eq!(
            zo_vrg_run(ptr::null(), set, &defaults, ptr::null(), 1, &mut report),
            ZO_NULL_ARGUMENT
        );

        let mut params = defaults;
        params.step_kind = 99;
        assert_eq!(
            zo_vrg_run(problem, set, &params, ptr::null(), 1, &mut report),
            ZO_INVALID_ARGUMENT
        );
        assert!(last_error().contains("unknown step kind 99"));

        params = defaults;
        params.batch_kind = -3;
        assert_eq!(
            zo_vrg_run(problem, set, &params, ptr::null(), 1, &mut report),
            ZO_INVALID_ARGUMENT
        );
        assert!(last_error().contains("unknown batch kind"));

        params = defaults;
        params.eta = -1.0;
        assert_eq!(
            zo_vrg_run(problem, set, &params, ptr::null(), 1, &mut report),
            ZO_INVALID_ARGUMENT
        );

        params = defaults;
        let bad_start = [f64::NAN, 0.0];
        assert_eq!(
            zo_vrg_run(problem, set, &params, bad_start.as_ptr(), 1, &mut report),
            ZO_NON_FINITE
        );

        let mut sqn = zo_vrsqn_params_default();
        sqn.memory = 0;
        assert_eq!(
            zo_vrsqn_run(problem, set, &sqn, ptr::null(), 1, &mut report),
            ZO_INVALID_ARGUMENT
        );
        sqn = zo_vrsqn_params_default();
        sqn.cold_start = 7;
        assert_eq!(
            zo_vrsqn_run(problem, set, &sqn, ptr::null(), 1, &mut report),
            ZO_INVALID_ARGUMENT
        );
        assert!(last_error().contains("unknown cold start 7"));
        assert!(report.is_null());

        // Buffer and index errors on a real report.
        params = defaults;
        params.budget = 2_000;
        assert_eq!(
            zo_vrg_run(problem, set, &params, ptr::null(), 1, &mut report),
            ZO_OK
        );
        let mut short = [0.0; 1];
        assert_eq!(
            zo_report_x_out(report, short.as_mut_ptr(), 1),
            ZO_BUFFER_TOO_SMALL
        );
        assert!(last_error().contains("buffer"));
        assert_eq!(
            zo_report_x_out(report, ptr::null_mut(), 2),
            ZO_NULL_ARGUMENT
        );
        // No trace was requested, so every index is out of range.
        assert_eq!(
            zo_report_trace_row(
                report,
                0,
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
            ),
            ZO_INVALID_ARGUMENT
        );
        assert!(last_error().contains("out of range"));

        zo_report_free(report);
        zo_set_free(set);
        zo_problem_free(problem);

        // Null handles are inert everywhere.
        zo_problem_free(ptr::null_mut());
        zo_set_free(ptr::null_mut());
        zo_report_free(ptr::null_mut());
        assert_eq!(zo_problem_dim(ptr::null()), 0);
        assert!(zo_problem_l0(ptr::null()).is_nan());
        assert_eq!(zo_report_dim(ptr::null()), 0);
        assert_eq!(zo_report_trace_len(ptr::null()), 0);
    }
}

fn exported_fn_names(src: &str) -> Vec<String> {
    let mut names = Vec::new();
    for line in src.lines() {
        let line = line.trim_start();
        let rest = line
            .strip_prefix("pub unsafe extern \"C\" fn ")
            .or_else(|| line.strip_prefix("pub extern \"C\" fn "));
        if let Some(rest) = rest {
            let name: String = rest
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                .collect();
            names.push(name);
        }
    }
    names
}

/// Identifiers of the form `zo_xxx` that the header applies a call/declaration
/// argument list to. Mentions in prose (no parenthesis) do not count.
fn header_fn_names(header: &str) -> Vec<String> {
    let bytes = header.as_bytes();
    let mut names = Vec::new();
    let mut i = 0;
    while let Some(offset) = header[i..].find("zo_") {
        let start = i + offset;
        // Skip matches inside a longer identifier such as `lzo_...`.
        if start > 0 && (bytes[start - 1].is_ascii_alphanumeric() || bytes[start - 1] == b'_') {
            i = start + 3;
            continue;
        }
        let mut end = start;
        while end < bytes.len()
            && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
        {
            end += 1;
        }
        if bytes[end..].first() == Some(&b'(') {
            names.push(header[start..end].to_owned());
        }
        i = end;
    }
    names.sort();
    names.dedup();
    names
}

fn defined_constants(header: &str) -> BTreeMap<String, i32> {
    header
        .lines()
        .filter_map(|line| {
            let rest = line.strip_prefix("#define ZO_")?;
            let (name, value) = rest.split_once(' ')?;
            Some((format!("ZO_{name}"), value.trim().parse().ok()?))
        })
        .collect()
}

fn const_items(src: &str) -> BTreeMap<String, i32> {
    src.lines()
        .filter_map(|line| {
            let rest = line.trim().strip_prefix("pub const ZO_")?;
            let (name, value) = rest.split_once(": i32 = ")?;
            Some((
                format!("ZO_{name}"),
                value.trim_end_matches(';').parse().ok()?,
            ))
        })
        .collect()
}

#[test]
fn header_declares_exactly_the_exported_surface() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/zo_nsnc.h"))
            .unwrap();

    let exported = exported_fn_names(&src);
    assert!(
        exported.len() >= 28,
        "export scan looks broken: {exported:?}"
    );
    let declared = header_fn_names(&header);

    for name in &exported {
        assert!(
            declared.contains(name),
            "exported `{name}` is missing from include/zo_nsnc.h"
        );
    }
    for name in &declared {
        assert!(
            exported.contains(name),
            "header declares `{name}` but src/lib.rs does not export it"
        );
    }

    let header_consts = defined_constants(&header);
    let rust_consts = const_items(&src);
    assert_eq!(
        header_consts, rust_consts,
        "status/kind constants drifted between header and library"
    );

    // Param struct fields must appear in the header in declaration order;
    // layout equality then follows from both sides using the C ABI rules.
    for (struct_name, fields) in [
        (
            "ZoVrgParams",
            vec![
                "eta",
                "step_kind",
                "gamma0",
                "step_c",
                "batch_kind",
                "batch_m",
                "batch_a",
                "batch_c",
                "batch_b",
                "budget",
                "lambda",
                "max_iters",
                "batch_cap",
                "metric_samples",
                "with_trace",
            ],
        ),
        (
            "ZoVrsqnParams",
            vec![
                "eta",
                "step_kind",
                "gamma0",
                "step_c",
                "batch_kind",
                "batch_m",
                "batch_a",
                "batch_c",
                "batch_b",
                "budget",
                "lambda",
                "memory",
                "delta",
                "cold_start",
                "max_iters",
                "batch_cap",
                "metric_samples",
                "with_trace",
            ],
        ),
    ] {
        let rust_body = struct_body(&src, &format!("pub struct {struct_name} {{"), "}");
        let c_body = struct_body(&header, &format!("typedef struct {struct_name} {{"), "}");
        assert_eq!(
            field_names_rust(&rust_body),
            fields,
            "{struct_name} fields changed in src/lib.rs; update this list and the header"
        );
        assert_eq!(
            field_names_c(&c_body),
            fields,
            "{struct_name} fields in the header disagree with src/lib.rs"
        );
    }
}

fn struct_body(text: &str, open: &str, close: &str) -> String {
    let start = text
        .find(open)
        .unwrap_or_else(|| panic!("`{open}` not found"))
        + open.len();
    let end = start + text[start..].find(close).unwrap();
    text[start..end].to_owned()
}

fn field_names_rust(body: &str) -> Vec<String> {
    body.lines()
        .filter_map(|line| {
            let rest = line.trim().strip_prefix("pub ")?;
            Some(rest.split(':').next()?.trim().to_owned())
        })
        .collect()
}

fn field_names_c(body: &str) -> Vec<String> {
    body.lines()
        .filter_map(|line| {
            let line = line.trim().strip_suffix(';')?;
            Some(line.rsplit([' ', '*']).next()?.to_owned())
        })
        .collect()
}
