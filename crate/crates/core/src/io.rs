//! Text file formats: matrices, recovery problems, sweep configurations and
//! result tables.
//!
//! Matrix files are plain text. The first line holds `rows cols`, followed by
//! `rows` lines of `cols` whitespace-separated decimals. Writers emit 17
//! significant digits, which round-trips every `f64` exactly.
//!
//! Problem and sweep files are TOML. All indices are 0-based.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{
    EnsembleSpec, MatrixFamily, NoiseModel, SignalModel, SweepRow, TieRule, TrialConfig, TrialRecord,
};
use crate::matrix::{DenseMatrix, RealVector};
use crate::support::{normalize, PriorSupport, SparseSignal};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty matrix file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(format!("header must be `rows cols`, got {header:?}")));
    };
    let mut entries = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (r, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| parse_err(format!("row {r}: bad number {t:?}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(parse_err(format!("row {r} has {} entries, expected {cols}", row.len())));
        }
        entries.extend(row);
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(parse_err(format!("found {seen_rows} rows, header says {rows}")));
    }
    DenseMatrix::from_row_slice(rows, cols, &entries)
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix(&read_file(path)?)
}

/// Formats a value with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for r in 0..a.rows() {
        let row: Vec<String> = (0..a.cols()).map(|c| format_real(a.get(r, c))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(a)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    matrix_file: Option<PathBuf>,
    matrix: Option<Vec<Vec<f64>>>,
    y: Vec<f64>,
    x: Option<Vec<f64>>,
    #[serde(default)]
    prior: Vec<usize>,
    k: Option<usize>,
    #[serde(default)]
    epsilon: f64,
}

/// A recovery problem `y = A x + v` with optional ground truth.
#[derive(Debug, Clone)]
pub struct Problem {
    pub matrix: DenseMatrix,
    pub y: RealVector,
    pub truth: Option<SparseSignal>,
    pub prior: PriorSupport,
    /// Sparsity `k`, when known.
    pub sparsity: Option<usize>,
    pub epsilon: f64,
}

/// Parses a problem file; a relative `matrix_file` is resolved against `base_dir`.
pub fn parse_problem(text: &str, base_dir: &Path) -> Result<Problem> {
    let raw: RawProblem = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let matrix = match (raw.matrix_file, raw.matrix) {
        (Some(path), None) => read_matrix(&base_dir.join(path))?,
        (None, Some(rows)) => {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(parse_err("inline matrix rows differ in length"));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            DenseMatrix::from_row_slice(rows.len(), cols, &flat)?
        }
        _ => return Err(parse_err("give exactly one of `matrix` and `matrix_file`")),
    };
    if raw.y.len() != matrix.rows() {
        return Err(parse_err(format!(
            "y has {} entries, matrix has {} rows",
            raw.y.len(),
            matrix.rows()
        )));
    }
    if !(raw.epsilon.is_finite() && raw.epsilon >= 0.0) {
        return Err(parse_err(format!("epsilon must be nonnegative, got {}", raw.epsilon)));
    }
    let truth = match raw.x {
        Some(x) => {
            if x.len() != matrix.cols() {
                return Err(parse_err(format!(
                    "x has {} entries, matrix has {} columns",
                    x.len(),
                    matrix.cols()
                )));
            }
            Some(SparseSignal::from_dense(&RealVector::from_vec(x))?)
        }
        None => None,
    };
    if let (Some(k), Some(t)) = (raw.k, &truth) {
        if t.sparsity() != k {
            return Err(parse_err(format!("k = {k} but x has {} nonzeros", t.sparsity())));
        }
    }
    let indices = normalize(raw.prior.clone());
    if indices.len() != raw.prior.len() {
        return Err(parse_err("prior contains duplicate indices"));
    }
    let prior = PriorSupport::new(indices, matrix.cols())?;
    Ok(Problem {
        y: RealVector::from_vec(raw.y),
        matrix,
        sparsity: raw.k.or(truth.as_ref().map(SparseSignal::sparsity)),
        truth,
        prior,
        epsilon: raw.epsilon,
    })
}

pub fn read_problem(path: &Path) -> Result<Problem> {
    let base = path.parent().unwrap_or(Path::new("."));
    parse_problem(&read_file(path)?, base)
}

/// Renders a problem file with the matrix inline.
pub fn format_problem(
    a: &DenseMatrix,
    y: &RealVector,
    truth: Option<&SparseSignal>,
    prior: &PriorSupport,
    epsilon: f64,
) -> String {
    let list = |v: &[f64]| v.iter().map(|x| format_real(*x)).collect::<Vec<_>>().join(", ");
    let mut out = String::from("matrix = [\n");
    for r in 0..a.rows() {
        let row: Vec<f64> = (0..a.cols()).map(|c| a.get(r, c)).collect();
        out.push_str(&format!("  [{}],\n", list(&row)));
    }
    out.push_str("]\n");
    out.push_str(&format!("y = [{}]\n", list(y.as_slice())));
    if let Some(t) = truth {
        out.push_str(&format!("x = [{}]\n", list(t.to_dense().as_slice())));
        out.push_str(&format!("k = {}\n", t.sparsity()));
    }
    let prior: Vec<String> = prior.indices().iter().map(usize::to_string).collect();
    out.push_str(&format!("prior = [{}]\n", prior.join(", ")));
    out.push_str(&format!("epsilon = {}\n", format_real(epsilon)));
    out
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum RawFamily {
    GaussianNormalized,
    GaussianRaw,
    Identity,
}

#[derive(Debug, Deserialize, Clone, Copy, Default)]
#[serde(rename_all = "snake_case")]
enum RawSignal {
    #[default]
    UnitRandomSign,
    Uniform,
}

#[derive(Debug, Deserialize, Clone, Copy, Default)]
#[serde(rename_all = "snake_case")]
enum RawNoise {
    #[default]
    Ball,
    WorstCase,
}

#[derive(Debug, Deserialize, Clone, Copy, Default)]
#[serde(rename_all = "snake_case")]
enum RawTie {
    #[default]
    Lowest,
    Highest,
    Adversarial,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    rows: usize,
    cols: usize,
    family: RawFamily,
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrial {
    k: usize,
    g: usize,
    b: usize,
    #[serde(default)]
    epsilon: f64,
    trials: usize,
    #[serde(default)]
    signal: RawSignal,
    magnitude_lo: Option<f64>,
    magnitude_hi: Option<f64>,
    #[serde(default)]
    noise: RawNoise,
    #[serde(default)]
    tie: RawTie,
    #[serde(default)]
    verify_ric: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    ensemble: RawEnsemble,
    #[serde(default)]
    trial: Vec<RawTrial>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ensemble: EnsembleSpec,
    pub trials: Vec<TrialConfig>,
}

/// Parses a sweep file: one `[ensemble]` table and any number of `[[trial]]` tables.
pub fn parse_sweep_config(text: &str) -> Result<SweepConfig> {
    let raw: RawSweep = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let ensemble = EnsembleSpec {
        rows: raw.ensemble.rows,
        cols: raw.ensemble.cols,
        family: match raw.ensemble.family {
            RawFamily::GaussianNormalized => MatrixFamily::GaussianNormalizedColumns,
            RawFamily::GaussianRaw => MatrixFamily::GaussianRaw,
            RawFamily::Identity => MatrixFamily::Identity,
        },
        seed: raw.ensemble.seed,
    };
    let trials = raw
        .trial
        .into_iter()
        .map(|t| {
            let signal = match (t.signal, t.magnitude_lo, t.magnitude_hi) {
                (RawSignal::UnitRandomSign, None, None) => SignalModel::UnitMagnitudeRandomSign,
                (RawSignal::Uniform, Some(lo), Some(hi)) => SignalModel::UniformMagnitude { lo, hi },
                _ => {
                    return Err(parse_err(
                        "magnitude_lo/magnitude_hi go with signal = \"uniform\" and only with it",
                    ))
                }
            };
            Ok(TrialConfig {
                k: t.k,
                g: t.g,
                b: t.b,
                noise_epsilon: t.epsilon,
                signal,
                noise: match t.noise {
                    RawNoise::Ball => NoiseModel::UniformBall,
                    RawNoise::WorstCase => NoiseModel::WorstCaseDirection,
                },
                trials: t.trials,
                tie: match t.tie {
                    RawTie::Lowest => TieRule::Lowest,
                    RawTie::Highest => TieRule::Highest,
                    RawTie::Adversarial => TieRule::Adversarial,
                },
                verify_ric: t.verify_ric,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepConfig { ensemble, trials })
}

pub fn read_sweep_config(path: &Path) -> Result<SweepConfig> {
    parse_sweep_config(&read_file(path)?)
}

pub const SWEEP_CSV_HEADER: &str =
    "k,g,b,epsilon,trials,threshold_rate,success_rate,exact_rate,mean_err_l2";

#[derive(Serialize)]
struct CsvRow {
    k: usize,
    g: usize,
    b: usize,
    epsilon: f64,
    trials: usize,
    threshold_rate: Option<f64>,
    success_rate: f64,
    exact_rate: f64,
    mean_err_l2: f64,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes the aggregate table. The header is written even for an empty table.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(SWEEP_CSV_HEADER.split(',')).map_err(csv_err)?;
    for r in rows {
        w.serialize(CsvRow {
            k: r.k,
            g: r.g,
            b: r.b,
            epsilon: r.epsilon,
            trials: r.trials,
            threshold_rate: r.threshold_rate,
            success_rate: r.success_rate,
            exact_rate: r.exact_rate,
            mean_err_l2: r.mean_err_l2,
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct TrialCsvRow {
    config: usize,
    trial: usize,
    support: String,
    prior: String,
    exact_delta: Option<f64>,
    threshold_satisfied: bool,
    magnitude_condition_satisfied: bool,
    success: bool,
    exact_recovery: bool,
    iterations: usize,
    error_l2: f64,
}

fn join_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Per-trial detail table; `records[i]` belongs to configuration `i`.
pub fn write_trial_csv<W: Write>(out: W, records: &[Vec<TrialRecord>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (config, recs) in records.iter().enumerate() {
        for r in recs {
            w.serialize(TrialCsvRow {
                config,
                trial: r.trial_index,
                support: join_indices(&r.support),
                prior: join_indices(&r.prior),
                exact_delta: r.exact_delta,
                threshold_satisfied: r.threshold_satisfied,
                magnitude_condition_satisfied: r.magnitude_condition_satisfied,
                success: r.success,
                exact_recovery: r.exact_recovery,
                iterations: r.iterations,
                error_l2: r.error_l2,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}
