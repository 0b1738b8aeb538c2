//! Command-line front end.
//!
//! Exit codes: 0 success, 1 malformed input or usage, 2 numerical failure
//! (including failed self-checks), 3 RIC subset budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{build_necessary, build_sharp, first_residual_correlations};
use crate::error::Error;
use crate::greedy::{omp_prior, success_check, RecoveryTrace, StoppingRule, TieBreakPolicy};
use crate::harness::{aggregate, run_config};
use crate::io::{format_real, read_matrix, read_problem, read_sweep_config, write_sweep_csv, write_trial_csv};
use crate::matrix::{DenseMatrix, RealVector};
use crate::ric::{exact_ric_with_budget, sharp_threshold, DEFAULT_SUBSET_BUDGET};
use crate::support::{contains, PriorSupport, SparseSignal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable capping the worker threads of `ric` and `sweep`.
pub const THREADS_ENV: &str = "OMP_PRIOR_THREADS";

#[derive(Parser, Debug)]
#[command(name = "omp-prior", version, about = "OMP with partial support information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run OMP from a prior support on a problem file.
    Recover {
        problem: PathBuf,
        /// `iters N` or `residual EPS`. Defaults to `residual epsilon` when the
        /// problem has epsilon > 0, otherwise `iters k-g`.
        #[arg(long, num_args = 2, value_names = ["RULE", "VALUE"])]
        stop: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = TieArg::Lowest)]
        tie: TieArg,
    },
    /// Exact restricted isometry constant of a matrix file.
    Ric {
        matrix: PathBuf,
        order: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u128,
    },
    /// Build one of the adversarial instances and show its exact tie.
    Demo {
        #[arg(value_enum)]
        which: DemoKind,
        k: usize,
        g: usize,
        b: usize,
        delta: Option<f64>,
        epsilon: Option<f64>,
    },
    /// Run a Monte Carlo sweep and write the aggregate CSV.
    Sweep {
        config: PathBuf,
        output: PathBuf,
        /// Also write one row per trial here.
        #[arg(long)]
        trials_out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TieArg {
    Lowest,
    Highest,
    Adversarial,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DemoKind {
    Sharp,
    Necessary,
}

/// A failure tagged with the stage it happened in and the exit code to use.
#[derive(Debug)]
struct Failure {
    stage: &'static str,
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            stage: "usage",
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::SelfCheckFailed(_) => EXIT_NUMERICAL,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, Failure>;
}

impl<T> Stage<T> for crate::error::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            stage,
            code: code_for(&e),
            message: e.to_string(),
        })
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let mut text = String::new();
    let result = match cli.command {
        Command::Recover { problem, stop, tie } => cmd_recover(&mut text, problem, stop, tie),
        Command::Ric { matrix, order, budget } => {
            with_pool(|| cmd_ric(&mut text, matrix, order, budget))
        }
        Command::Demo {
            which,
            k,
            g,
            b,
            delta,
            epsilon,
        } => cmd_demo(&mut text, which, k, g, b, delta, epsilon),
        Command::Sweep {
            config,
            output,
            trials_out,
        } => with_pool(|| cmd_sweep(&mut text, config, output, trials_out)),
    };
    let _ = out.write_all(text.as_bytes());
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error ({}): {}", f.stage, f.message);
            f.code
        }
    }
}

fn with_pool(job: impl FnOnce() -> Result<(), Failure> + Send) -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return job();
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::usage(format!("cannot build thread pool: {e}")))?;
    pool.install(job)
}

fn tie_policy(tie: TieArg, truth: Option<&SparseSignal>, prior: &PriorSupport) -> Result<TieBreakPolicy, Failure> {
    Ok(match tie {
        TieArg::Lowest => TieBreakPolicy::LowestIndex,
        TieArg::Highest => TieBreakPolicy::HighestIndex,
        TieArg::Adversarial => {
            let truth = truth.ok_or_else(|| Failure::usage("--tie adversarial needs the true signal `x` in the problem file"))?;
            TieBreakPolicy::AdversarialOutside {
                truth: truth.support().to_vec(),
                prior: prior.indices().to_vec(),
            }
        }
    })
}

fn parse_stop(words: &[String]) -> Result<StoppingRule, Failure> {
    let bad = || Failure::usage(format!("--stop expects `iters N` or `residual EPS`, got {words:?}"));
    match words {
        [rule, value] if rule == "iters" => value.parse().map(StoppingRule::FixedIterations).map_err(|_| bad()),
        [rule, value] if rule == "residual" => match value.parse::<f64>() {
            Ok(eps) if eps.is_finite() && eps >= 0.0 => Ok(StoppingRule::ResidualThreshold(eps)),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn write_trace(text: &mut String, trace: &RecoveryTrace) {
    let _ = writeln!(text, "{:>4} {:>6} {:>24}", "t", "j_t", "residual_norm");
    let _ = writeln!(text, "{:>4} {:>6} {:>24}", 0, "-", format_real(trace.residual_norms[0]));
    for (t, j) in trace.selected.iter().enumerate() {
        let tie = if trace.ties[t] { " tie" } else { "" };
        let _ = writeln!(
            text,
            "{:>4} {:>6} {:>24}{tie}",
            t + 1,
            j,
            format_real(trace.residual_norms[t + 1])
        );
    }
}

fn write_vector(text: &mut String, name: &str, v: &RealVector) {
    let _ = writeln!(text, "{name}");
    for (i, x) in v.iter().enumerate() {
        let _ = writeln!(text, "{i:>6} {:>24}", format_real(*x));
    }
}

fn cmd_recover(text: &mut String, path: PathBuf, stop: Option<Vec<String>>, tie: TieArg) -> Result<(), Failure> {
    let problem = read_problem(&path).stage("reading problem")?;
    let truth = problem.truth.as_ref();
    let stop = match stop {
        Some(words) => parse_stop(&words)?,
        None if problem.epsilon > 0.0 => StoppingRule::ResidualThreshold(problem.epsilon),
        None => {
            let k = problem
                .sparsity
                .ok_or_else(|| Failure::usage("no --stop given and the problem has neither k nor epsilon > 0"))?;
            let g = match truth {
                Some(t) => problem.prior.correct_count(t.support()),
                None => problem.prior.len(),
            };
            StoppingRule::FixedIterations(k.saturating_sub(g))
        }
    };
    let tie = tie_policy(tie, truth, &problem.prior)?;
    let trace = omp_prior(&problem.matrix, &problem.y, &problem.prior, stop, &tie).stage("running OMP")?;
    write_trace(text, &trace);
    write_vector(text, "estimate", &trace.estimate);
    if let Some(t) = truth {
        let ok = success_check(&trace, t, &problem.prior).stage("checking success")?;
        let _ = writeln!(text, "success {ok}");
    }
    Ok(())
}

fn cmd_ric(text: &mut String, path: PathBuf, order: usize, budget: u128) -> Result<(), Failure> {
    let a = read_matrix(&path).stage("reading matrix")?;
    let report = exact_ric_with_budget(&a, order, budget).stage("computing RIC")?;
    let witness: Vec<String> = report.witness.iter().map(usize::to_string).collect();
    let _ = writeln!(text, "order {}", report.order);
    let _ = writeln!(text, "delta {}", format_real(report.value));
    let _ = writeln!(text, "witness {}", witness.join(" "));
    let _ = writeln!(text, "subsets {}", report.subsets_evaluated);
    Ok(())
}

fn write_spectra(text: &mut String, advertised: &[f64], measured: &[f64]) {
    let _ = writeln!(text, "spectrum of A'A (ascending)");
    let _ = writeln!(text, "{:>24} {:>24}", "advertised", "measured");
    for (a, m) in advertised.iter().zip(measured) {
        let _ = writeln!(text, "{:>24} {:>24}", format_real(*a), format_real(*m));
    }
}

fn region(i: usize, truth: &[usize], prior: &[usize]) -> &'static str {
    match (contains(truth, i), contains(prior, i)) {
        (true, false) => "T\\T0",
        (true, true) => "T&T0",
        (false, true) => "T0\\T",
        (false, false) => "outside",
    }
}

fn write_correlations(text: &mut String, corr: &RealVector, truth: &[usize], prior: &[usize]) {
    let _ = writeln!(text, "first-iteration correlations <A e_i, r0>");
    for (i, c) in corr.iter().enumerate() {
        let _ = writeln!(text, "{i:>6} {:>24} {}", format_real(*c), region(i, truth, prior));
    }
}

/// Largest |corr| over T\T0 and |corr| at the outside index.
fn tie_sides(corr: &RealVector, truth: &[usize], prior: &[usize], outside: usize) -> (f64, f64) {
    let inside = truth
        .iter()
        .filter(|&&i| !contains(prior, i))
        .map(|&i| corr[i].abs())
        .fold(0.0, f64::max);
    (inside, corr[outside].abs())
}

/// Runs the adversarial recovery and checks that it picks `outside` first and fails.
fn adversarial_failure(
    text: &mut String,
    a: &DenseMatrix,
    y: &RealVector,
    truth: &SparseSignal,
    prior: &PriorSupport,
    steps: usize,
    outside: usize,
) -> Result<(), Failure> {
    let tie = TieBreakPolicy::AdversarialOutside {
        truth: truth.support().to_vec(),
        prior: prior.indices().to_vec(),
    };
    let trace = omp_prior(a, y, prior, StoppingRule::FixedIterations(steps), &tie).stage("adversarial run")?;
    let _ = writeln!(text, "adversarial tie resolution");
    write_trace(text, &trace);
    let ok = success_check(&trace, truth, prior).stage("adversarial run")?;
    let _ = writeln!(text, "success {ok}");
    if ok || trace.selected.first() != Some(&outside) {
        return Err(Failure {
            stage: "adversarial run",
            code: EXIT_NUMERICAL,
            message: format!("expected index {outside} to be selected first and recovery to fail"),
        });
    }
    Ok(())
}

fn check_tie(inside: f64, outside: f64, expected: f64, tol: f64) -> Result<(), Failure> {
    if (inside - expected).abs() > tol || (outside - expected).abs() > tol {
        return Err(Failure {
            stage: "tie check",
            code: EXIT_NUMERICAL,
            message: format!("sides {inside} and {outside} do not both equal {expected}"),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_demo(
    text: &mut String,
    which: DemoKind,
    k: usize,
    g: usize,
    b: usize,
    delta: Option<f64>,
    epsilon: Option<f64>,
) -> Result<(), Failure> {
    if g >= k {
        return Err(Failure::usage(format!(
            "demo needs g < k (got k = {k}, g = {g}); usage: demo sharp K G B | demo necessary K G B DELTA EPSILON"
        )));
    }
    let threshold = sharp_threshold(k, g, b).stage("threshold")?;
    let steps = k - g;
    match which {
        DemoKind::Sharp => {
            if delta.is_some() || epsilon.is_some() {
                return Err(Failure::usage("demo sharp takes only K G B"));
            }
            let inst = build_sharp(k, g, b).stage("building sharp instance")?;
            let _ = writeln!(text, "sharp instance k={k} g={g} b={b}, {0}x{0}", k + b + 1);
            write_spectra(text, &inst.advertised_spectrum, &inst.measured_spectrum);
            let _ = writeln!(text, "delta advertised {}", format_real(inst.advertised_delta));
            let _ = writeln!(text, "delta measured   {}", format_real(inst.measured_delta));
            let _ = writeln!(text, "threshold        {}", format_real(threshold));
            let y = inst.measurements();
            let corr = first_residual_correlations(&inst.matrix, &y, &inst.prior).stage("correlations")?;
            write_correlations(text, &corr, inst.signal.support(), inst.prior.indices());
            let (inside, outside) = tie_sides(&corr, inst.signal.support(), inst.prior.indices(), inst.outside_index());
            let _ = writeln!(text, "tie value   {}", format_real(inst.tie_value()));
            let _ = writeln!(text, "max over T\\T0 {}", format_real(inside));
            let _ = writeln!(text, "outside       {}", format_real(outside));
            check_tie(inside, outside, inst.tie_value(), 1e-10)?;
            adversarial_failure(text, &inst.matrix, &y, &inst.signal, &inst.prior, steps, inst.outside_index())
        }
        DemoKind::Necessary => {
            let (Some(delta), Some(epsilon)) = (delta, epsilon) else {
                return Err(Failure::usage("demo necessary takes K G B DELTA EPSILON"));
            };
            let inst = build_necessary(k, g, b, delta, epsilon).stage("building necessary instance")?;
            let _ = writeln!(text, "necessary instance k={k} g={g} b={b}, {0}x{0}", k + b + 1);
            let mut advertised = vec![1.0 - delta];
            advertised.extend(std::iter::repeat_n(1.0 + delta, k + b));
            let measured = crate::matrix::symmetric_eigenvalues(&inst.matrix.gram()).stage("spectrum")?;
            write_spectra(text, &advertised, measured.as_slice());
            let _ = writeln!(text, "delta       {}", format_real(delta));
            let _ = writeln!(text, "threshold   {}", format_real(threshold));
            let _ = writeln!(text, "epsilon     {}", format_real(epsilon));
            let _ = writeln!(text, "noise norm  {}", format_real(inst.noise.norm()));
            let _ = writeln!(text, "theta       {}", format_real(inst.theta));
            let _ = writeln!(text, "eta         {}", format_real(inst.eta));
            let y = inst.measurements();
            let corr = first_residual_correlations(&inst.matrix, &y, &inst.prior).stage("correlations")?;
            write_correlations(text, &corr, inst.signal.support(), inst.prior.indices());
            let (inside, outside) = tie_sides(&corr, inst.signal.support(), inst.prior.indices(), inst.outside_index());
            let _ = writeln!(text, "mu            {}", format_real(inst.mu));
            let _ = writeln!(text, "max over T\\T0 {}", format_real(inside));
            let _ = writeln!(text, "outside       {}", format_real(outside));
            check_tie(inside, outside, inst.mu, 1e-10 * inst.mu.max(1.0))?;
            adversarial_failure(text, &inst.matrix, &y, &inst.signal, &inst.prior, steps, inst.outside_index())
        }
    }
}

fn create(path: &PathBuf) -> Result<std::fs::File, Failure> {
    std::fs::File::create(path).map_err(|e| Failure {
        stage: "writing output",
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_sweep(text: &mut String, config: PathBuf, output: PathBuf, trials_out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = read_sweep_config(&config).stage("reading sweep config")?;
    let mut rows = Vec::with_capacity(cfg.trials.len());
    let mut records = Vec::new();
    for (i, trial) in cfg.trials.iter().enumerate() {
        let recs = run_config(&cfg.ensemble, trial, i as u64).stage("running sweep")?;
        rows.push(aggregate(trial, &recs));
        if trials_out.is_some() {
            records.push(recs);
        }
    }
    write_sweep_csv(create(&output)?, &rows).stage("writing output")?;
    if let Some(path) = trials_out {
        write_trial_csv(create(&path)?, &records).stage("writing output")?;
    }
    let _ = writeln!(text, "wrote {} rows to {}", rows.len(), output.display());
    Ok(())
}
