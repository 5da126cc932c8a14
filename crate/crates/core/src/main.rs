//! Command-line driver: configured solver runs, side-by-side comparisons,
//! the built-in benchmark grids, and the fast invariant suite.
//!
//! Exit codes: 0 on success, 1 on runtime failures (including failed
//! verification), 2 on configuration or usage errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zo_nsnc::config::{Experiment, RawConfig};
use zo_nsnc::harness::{
    self, aggregate, emit_accuracy_csv, emit_grid_csv, emit_trace_csv, grid_row_string,
    run_reps, Algo, Bench, BenchOutput, GRID_CSV_HEADER,
};
use zo_nsnc::{Error, Result};

#[derive(Parser)]
#[command(
    name = "zo-nsnc",
    version,
    about = "Zeroth-order solvers for nonsmooth nonconvex stochastic minimization over convex sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver on a configured experiment and emit a CSV summary
    Run {
        /// Solver: vrg or vrsqn
        #[arg(long)]
        algo: String,
        /// Path to a key = value experiment file
        #[arg(long)]
        config: PathBuf,
        /// Base seed; repetition r uses seed + r
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Seeded repetitions to average over
        #[arg(long, default_value_t = 1)]
        reps: u32,
        /// Write the summary CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also record progress snapshots and write them here in long format
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Thread count for repetitions (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Override a config key, e.g. -D budget=100000 (repeatable)
        #[arg(short = 'D', long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run both solvers on matching experiments and emit a side-by-side CSV
    Compare {
        /// Experiment file for the projected-gradient solver
        #[arg(long)]
        vrg: PathBuf,
        /// Experiment file for the quasi-Newton solver
        #[arg(long)]
        vrsqn: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Reproduce one of the built-in benchmark grids
    Bench {
        /// Which grid: logistic-accuracy, logistic-sqn, logistic-vrg,
        /// minquad-sqn, minquad-vrg (or an index 4-8)
        #[arg(long)]
        table: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        reps: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the fast invariant suite; fails the process if any check fails
    Verify,
}

fn load_experiment(path: &Path, overrides: &[String]) -> Result<Experiment> {
    let mut raw = RawConfig::load(path)?;
    for kv in overrides {
        raw.apply_override(kv)?;
    }
    raw.build()
}

/// Render CSV to `--out` (announcing the path) or to stdout.
fn write_csv(
    out: Option<&Path>,
    render: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            render(&mut w)?;
            w.flush()?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)?;
            Ok(())
        }
    }
}

fn cmd_run(
    algo: &str,
    config: &Path,
    seed: u64,
    reps: u32,
    out: Option<&Path>,
    plot_data: Option<&Path>,
    jobs: Option<usize>,
    overrides: &[String],
) -> Result<()> {
    let algo: Algo = algo.parse()?;
    let experiment = load_experiment(config, overrides)?;
    let outcomes = run_reps(&experiment, algo, seed, reps, jobs, plot_data.is_some())?;
    let row = aggregate(&experiment, &outcomes);
    write_csv(out, |w| emit_grid_csv(w, std::slice::from_ref(&row)))?;
    if let Some(path) = plot_data {
        let mut w = BufWriter::new(File::create(path)?);
        emit_trace_csv(&mut w, &outcomes)?;
        w.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_compare(
    vrg_path: &Path,
    vrsqn_path: &Path,
    seed: u64,
    reps: u32,
    out: Option<&Path>,
    jobs: Option<usize>,
) -> Result<()> {
    let vrg_exp = load_experiment(vrg_path, &[])?;
    let vrsqn_exp = load_experiment(vrsqn_path, &[])?;
    if vrg_exp.problem != vrsqn_exp.problem {
        return Err(Error::invalid(format!(
            "compared experiments must share a problem: {} vs {}",
            vrg_exp.problem.signature(),
            vrsqn_exp.problem.signature()
        )));
    }
    if vrg_exp.budget != vrsqn_exp.budget {
        return Err(Error::BudgetMismatch(vrg_exp.budget, vrsqn_exp.budget));
    }
    if vrg_exp.set != vrsqn_exp.set {
        return Err(Error::invalid(
            "compared experiments must share a feasible set",
        ));
    }
    let vrg_rows = run_reps(&vrg_exp, Algo::Vrg, seed, reps, jobs, false)?;
    let vrsqn_rows = run_reps(&vrsqn_exp, Algo::Vrsqn, seed, reps, jobs, false)?;
    let entries = [
        (Algo::Vrg, aggregate(&vrg_exp, &vrg_rows)),
        (Algo::Vrsqn, aggregate(&vrsqn_exp, &vrsqn_rows)),
    ];
    write_csv(out, |w| {
        writeln!(w, "algo,{GRID_CSV_HEADER}")?;
        for (algo, row) in &entries {
            writeln!(w, "{},{}", algo.name(), grid_row_string(row))?;
        }
        Ok(())
    })?;
    eprintln!(
        "final objective: vrg {} vs vrsqn {} over {} rep(s) of {} evaluations",
        entries[0].1.f_k, entries[1].1.f_k, reps, vrg_exp.budget
    );
    Ok(())
}

fn cmd_bench(
    table: &str,
    seed: u64,
    reps: u32,
    out: Option<&Path>,
    jobs: Option<usize>,
) -> Result<()> {
    let bench: Bench = table.parse()?;
    match harness::run_bench(bench, seed, reps, jobs)? {
        BenchOutput::Grid(rows) => write_csv(out, |w| emit_grid_csv(w, &rows)),
        BenchOutput::Accuracy(rows) => write_csv(out, |w| emit_accuracy_csv(w, &rows)),
    }
}

fn cmd_verify() -> Result<ExitCode> {
    let results = harness::verify_suite();
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "ok  " } else { "FAIL" };
        println!("{status} {:32} {}", r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} of {} checks passed", results.len() - failed, results.len());
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            algo,
            config,
            seed,
            reps,
            out,
            plot_data,
            jobs,
            overrides,
        } => {
            cmd_run(
                &algo,
                &config,
                seed,
                reps,
                out.as_deref(),
                plot_data.as_deref(),
                jobs,
                &overrides,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            vrg,
            vrsqn,
            seed,
            reps,
            out,
            jobs,
        } => {
            cmd_compare(&vrg, &vrsqn, seed, reps, out.as_deref(), jobs)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            table,
            seed,
            reps,
            out,
            jobs,
        } => {
            cmd_bench(&table, seed, reps, out.as_deref(), jobs)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => cmd_verify(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
