//! Seeded Monte Carlo experiments over random sensing matrices.
//!
//! Every trial owns a ChaCha stream derived from `(seed, stream, trial)`, so
//! results do not depend on scheduling: trials run in parallel on the
//! current rayon pool and are reduced in trial order.
//!
//! Draw order within a trial is fixed: matrix, support `T`, signal values,
//! prior `T0`, noise. Configurations sharing a stream and differing only in
//! `(g, b)` therefore see the same matrices, supports and signals.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greedy::{
    exact_recovery_check, omp_prior, success_check, support_estimate_diagnostics,
    EstimateDiagnostics, StoppingRule, TieBreakPolicy,
};
use crate::matrix::{projection_residual, DenseMatrix, RealVector};
use crate::ric::{binomial, exact_ric, sharp_threshold, sufficient_min_magnitude, DEFAULT_SUBSET_BUDGET};
use crate::support::{complement, difference, normalize, IndexSet, PriorSupport, SparseSignal};

/// Exact recovery tolerance, relative to `max(1, ||x||_inf)`.
pub const EXACT_RECOVERY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFamily {
    /// i.i.d. standard normal entries, columns scaled to unit norm.
    GaussianNormalizedColumns,
    /// i.i.d. `N(0, 1/m)` entries.
    GaussianRaw,
    /// First `n` columns of `I_m` (needs `m >= n`); for testing.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub rows: usize,
    pub cols: usize,
    pub family: MatrixFamily,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalModel {
    /// `±1` with fair signs.
    UnitMagnitudeRandomSign,
    /// Magnitude uniform in `[lo, hi]`, fair sign.
    UniformMagnitude { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// Uniform in the `ε`-ball.
    UniformBall,
    /// `||v|| = ε`, pointed so as to raise the correlation of the most
    /// competitive column outside `T ∪ T0` with the initial residual.
    WorstCaseDirection,
}

/// Tie resolution per trial; the adversarial variant is instantiated with the
/// trial's own `T` and `T0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Lowest,
    Highest,
    Adversarial,
}

impl TieRule {
    fn policy(self, truth: &[usize], prior: &[usize]) -> TieBreakPolicy {
        match self {
            TieRule::Lowest => TieBreakPolicy::LowestIndex,
            TieRule::Highest => TieBreakPolicy::HighestIndex,
            TieRule::Adversarial => TieBreakPolicy::AdversarialOutside {
                truth: truth.to_vec(),
                prior: prior.to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub k: usize,
    pub g: usize,
    pub b: usize,
    pub noise_epsilon: f64,
    pub signal: SignalModel,
    pub noise: NoiseModel,
    pub trials: usize,
    pub tie: TieRule,
    /// Compute the exact `δ_{k+b+1}` of every drawn matrix.
    pub verify_ric: bool,
}

impl TrialConfig {
    pub fn noiseless(k: usize, g: usize, b: usize, trials: usize) -> Self {
        Self {
            k,
            g,
            b,
            noise_epsilon: 0.0,
            signal: SignalModel::UnitMagnitudeRandomSign,
            noise: NoiseModel::UniformBall,
            trials,
            tie: TieRule::Lowest,
            verify_ric: false,
        }
    }

    /// Residual-threshold stopping for noisy runs, `k - g` fixed steps otherwise.
    fn stopping_rule(&self) -> StoppingRule {
        if self.noise_epsilon > 0.0 {
            StoppingRule::ResidualThreshold(self.noise_epsilon)
        } else {
            StoppingRule::FixedIterations(self.k - self.g)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub support: IndexSet,
    pub prior: IndexSet,
    pub exact_delta: Option<f64>,
    pub threshold_satisfied: bool,
    /// `min_{i ∈ T} |x_i|` exceeds the sufficient noisy-case floor.
    pub magnitude_condition_satisfied: bool,
    pub success: bool,
    pub exact_recovery: bool,
    /// Selections, as a set, equal `T \ T0` and there are exactly `k - g` of them.
    pub remainder_recovered: bool,
    pub iterations: usize,
    /// `NaN` when the run hit a rank-deficient support.
    pub error_l2: f64,
    pub diagnostics: Option<EstimateDiagnostics>,
}

impl TrialRecord {
    pub fn compliant(&self) -> bool {
        self.threshold_satisfied && self.magnitude_condition_satisfied
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_rng(seed: u64, stream: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ splitmix(stream)) ^ trial as u64))
}

fn check_feasible(spec: &EnsembleSpec, config: &TrialConfig) -> Result<()> {
    let (m, n) = (spec.rows, spec.cols);
    if m == 0 || n == 0 {
        return Err(Error::ConfigInfeasible(format!("ensemble shape {m}x{n}")));
    }
    if spec.family == MatrixFamily::Identity && m < n {
        return Err(Error::ConfigInfeasible("identity family needs rows >= cols".into()));
    }
    let TrialConfig { k, g, b, .. } = *config;
    if k == 0 || g >= k {
        return Err(Error::ConfigInfeasible(format!("need 0 <= g < k, got k = {k}, g = {g}")));
    }
    if k > m {
        return Err(Error::ConfigInfeasible(format!("k = {k} exceeds rows m = {m}")));
    }
    if k + b > n {
        return Err(Error::ConfigInfeasible(format!(
            "k + b = {} exceeds cols n = {n}",
            k + b
        )));
    }
    if !(config.noise_epsilon.is_finite() && config.noise_epsilon >= 0.0) {
        return Err(Error::ConfigInfeasible(format!(
            "noise epsilon must be finite and nonnegative, got {}",
            config.noise_epsilon
        )));
    }
    if let SignalModel::UniformMagnitude { lo, hi } = config.signal {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::ConfigInfeasible(format!("magnitude range [{lo}, {hi}]")));
        }
    }
    if config.verify_ric {
        let order = k + b + 1;
        if order > n {
            return Err(Error::ConfigInfeasible(format!(
                "RIC order k + b + 1 = {order} exceeds cols n = {n}"
            )));
        }
        let required = binomial(n, order);
        if required > DEFAULT_SUBSET_BUDGET {
            return Err(Error::BudgetExceeded {
                required,
                budget: DEFAULT_SUBSET_BUDGET,
            });
        }
    }
    Ok(())
}

/// Draws one sensing matrix from the ensemble.
pub fn draw_matrix(spec: &EnsembleSpec, rng: &mut impl Rng) -> Result<DenseMatrix> {
    let (m, n) = (spec.rows, spec.cols);
    let data = match spec.family {
        MatrixFamily::Identity => DMatrix::identity(m, n),
        MatrixFamily::GaussianRaw => {
            let scale = 1.0 / (m as f64).sqrt();
            DMatrix::from_fn(m, n, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
        }
        MatrixFamily::GaussianNormalizedColumns => {
            let mut a = DMatrix::from_fn(m, n, |_, _| rng.sample::<f64, _>(StandardNormal));
            for mut col in a.column_iter_mut() {
                let norm = col.norm();
                col /= norm;
            }
            a
        }
    };
    DenseMatrix::new(data)
}

fn draw_subset(rng: &mut impl Rng, from: &[usize], count: usize) -> IndexSet {
    normalize(sample(rng, from.len(), count).into_iter().map(|i| from[i]).collect())
}

fn draw_values(rng: &mut impl Rng, model: SignalModel, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| {
            let magnitude = match model {
                SignalModel::UnitMagnitudeRandomSign => 1.0,
                SignalModel::UniformMagnitude { lo, hi } => rng.random_range(lo..=hi),
            };
            if rng.random::<bool>() {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect()
}

fn unit_gaussian(rng: &mut impl Rng, m: usize) -> RealVector {
    loop {
        let v = RealVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 0.0 {
            return v / norm;
        }
    }
}

fn draw_noise(
    rng: &mut impl Rng,
    model: NoiseModel,
    epsilon: f64,
    a: &DenseMatrix,
    clean: &RealVector,
    truth: &[usize],
    prior: &PriorSupport,
) -> Result<RealVector> {
    let m = a.rows();
    if epsilon == 0.0 {
        return Ok(RealVector::zeros(m));
    }
    match model {
        NoiseModel::UniformBall => {
            let direction = unit_gaussian(rng, m);
            let radius = epsilon * rng.random::<f64>().powf(1.0 / m as f64);
            Ok(direction * radius)
        }
        NoiseModel::WorstCaseDirection => {
            let basis = a.select_columns(prior.indices())?;
            let r0 = projection_residual(&basis, clean)?;
            let corr = a.correlate(&r0)?;
            let outside = complement(&crate::support::union(truth, prior.indices()), a.cols());
            let Some(&j) = outside
                .iter()
                .max_by(|&&p, &&q| corr[p].abs().total_cmp(&corr[q].abs()).then(q.cmp(&p)))
            else {
                return Ok(unit_gaussian(rng, m) * epsilon);
            };
            let pushed = projection_residual(&basis, &a.column(j))?;
            let norm = pushed.norm();
            if norm == 0.0 {
                return Ok(unit_gaussian(rng, m) * epsilon);
            }
            let sign = if corr[j] >= 0.0 { 1.0 } else { -1.0 };
            Ok(pushed * (sign * epsilon / norm))
        }
    }
}

struct DrawnTrial {
    a: DenseMatrix,
    truth: SparseSignal,
    prior: PriorSupport,
    rng: ChaCha8Rng,
}

fn draw_trial(spec: &EnsembleSpec, config: &TrialConfig, stream: u64, trial: usize) -> Result<DrawnTrial> {
    let n = spec.cols;
    let mut rng = trial_rng(spec.seed, stream, trial);
    let a = draw_matrix(spec, &mut rng)?;
    let all: Vec<usize> = (0..n).collect();
    let support = draw_subset(&mut rng, &all, config.k);
    let values = draw_values(&mut rng, config.signal, config.k);
    let truth = SparseSignal::new(n, support.clone(), values)?;
    let right = draw_subset(&mut rng, &support, config.g);
    let wrong = draw_subset(&mut rng, &complement(&support, n), config.b);
    let prior = PriorSupport::new(crate::support::union(&right, &wrong), n)?;
    Ok(DrawnTrial { a, truth, prior, rng })
}

/// The matrix, signal and prior of one trial, exactly as [`run_config`] draws
/// them (before any magnitude rescaling or noise).
pub fn trial_instance(
    spec: &EnsembleSpec,
    config: &TrialConfig,
    stream: u64,
    trial: usize,
) -> Result<(DenseMatrix, SparseSignal, PriorSupport)> {
    check_feasible(spec, config)?;
    let d = draw_trial(spec, config, stream, trial)?;
    Ok((d.a, d.truth, d.prior))
}

fn scaled_signal(truth: &SparseSignal, factor: f64) -> Result<SparseSignal> {
    SparseSignal::new(
        truth.dimension(),
        truth.support().to_vec(),
        truth.values().iter().map(|v| v * factor).collect(),
    )
}

fn counterexample(a: &DenseMatrix, y: &RealVector, truth: &SparseSignal, prior: &PriorSupport, delta: f64) -> String {
    format!(
        "delta = {delta:.17e}\nsupport = {:?}\nvalues = {:?}\nprior = {:?}\ny = {:?}\nA ({}x{}, row-major) = {:?}",
        truth.support(),
        truth.values(),
        prior.indices(),
        y.as_slice(),
        a.rows(),
        a.cols(),
        a.as_matrix().transpose().as_slice(),
    )
}

/// Runs one trial. `floor_factor`, when set, rescales a threshold-compliant
/// signal so that `min |x_i| = floor_factor * floor` with `floor` the
/// sufficient noisy-case magnitude. One record per entry of `ties`.
fn run_trial_ties(
    spec: &EnsembleSpec,
    config: &TrialConfig,
    stream: u64,
    trial: usize,
    floor_factor: Option<f64>,
    ties: &[TieRule],
) -> Result<Vec<TrialRecord>> {
    let DrawnTrial {
        a,
        mut truth,
        prior,
        mut rng,
    } = draw_trial(spec, config, stream, trial)?;
    let TrialConfig { k, g, b, noise_epsilon: eps, .. } = *config;
    let threshold = sharp_threshold(k, g, b)?;
    let exact_delta = if config.verify_ric {
        Some(exact_ric(&a, k + b + 1)?.value)
    } else {
        None
    };
    let threshold_satisfied = exact_delta.is_some_and(|d| d < threshold);

    let floor = match exact_delta {
        Some(d) if threshold_satisfied => Some(sufficient_min_magnitude(d, k, g, eps)?),
        _ => None,
    };
    if let (Some(floor), Some(factor)) = (floor, floor_factor) {
        if floor > 0.0 {
            truth = scaled_signal(&truth, factor * floor / truth.min_magnitude())?;
        }
    }
    let magnitude_condition_satisfied = match floor {
        Some(floor) => eps == 0.0 || truth.min_magnitude() > floor,
        None => eps == 0.0,
    };

    let clean = a.apply(&truth.to_dense())?;
    let noise = draw_noise(&mut rng, config.noise, eps, &a, &clean, truth.support(), &prior)?;
    let y = &clean + noise;

    ties.iter()
        .map(|&tie| {
            let policy = tie.policy(truth.support(), prior.indices());
            let trace = match omp_prior(&a, &y, &prior, config.stopping_rule(), &policy) {
                Ok(trace) => trace,
                Err(Error::RankDeficient { .. }) if !(threshold_satisfied && eps == 0.0) => {
                    return Ok(TrialRecord {
                        trial_index: trial,
                        support: truth.support().to_vec(),
                        prior: prior.indices().to_vec(),
                        exact_delta,
                        threshold_satisfied,
                        magnitude_condition_satisfied,
                        success: false,
                        exact_recovery: false,
                        remainder_recovered: false,
                        iterations: 0,
                        error_l2: f64::NAN,
                        diagnostics: None,
                    });
                }
                Err(e) => return Err(e),
            };

            let success = success_check(&trace, &truth, &prior)?;
            let tol = EXACT_RECOVERY_TOL * truth.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let exact_recovery = exact_recovery_check(&trace, &truth, tol)?;
            let remainder = difference(truth.support(), prior.indices());
            let remainder_recovered =
                trace.iterations() == remainder.len() && normalize(trace.selected.clone()) == remainder;
            let diagnostics = support_estimate_diagnostics(&trace, &truth, &prior)?;

            if threshold_satisfied && eps == 0.0 && !(success && exact_recovery) {
                return Err(Error::TheoremViolation(format!(
                    "trial {trial} ({tie:?} ties): success = {success}, exact = {exact_recovery}, selected = {:?}\n{}",
                    trace.selected,
                    counterexample(&a, &y, &truth, &prior, exact_delta.unwrap_or(f64::NAN))
                )));
            }

            Ok(TrialRecord {
                trial_index: trial,
                support: truth.support().to_vec(),
                prior: prior.indices().to_vec(),
                exact_delta,
                threshold_satisfied,
                magnitude_condition_satisfied,
                success,
                exact_recovery,
                remainder_recovered,
                iterations: trace.iterations(),
                error_l2: diagnostics.error_l2,
                diagnostics: Some(diagnostics),
            })
        })
        .collect()
}

fn run_trial(
    spec: &EnsembleSpec,
    config: &TrialConfig,
    stream: u64,
    trial: usize,
    floor_factor: Option<f64>,
) -> Result<TrialRecord> {
    let mut records = run_trial_ties(spec, config, stream, trial, floor_factor, &[config.tie])?;
    Ok(records.remove(0))
}

/// Like [`run_config`], but replays every trial once per tie rule on the same
/// draw (matrix, signal, prior, noise, and `δ` computed once).
/// `result[t][j]` is trial `t` under `ties[j]`; `config.tie` is ignored.
pub fn run_config_ties(
    spec: &EnsembleSpec,
    config: &TrialConfig,
    stream: u64,
    ties: &[TieRule],
) -> Result<Vec<Vec<TrialRecord>>> {
    check_feasible(spec, config)?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial_ties(spec, config, stream, t, None, ties))
        .collect()
}

/// All trial records of one configuration, in trial order.
pub fn run_config(spec: &EnsembleSpec, config: &TrialConfig, stream: u64) -> Result<Vec<TrialRecord>> {
    check_feasible(spec, config)?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, config, stream, t, None))
        .collect()
}

/// One aggregated row per configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub g: usize,
    pub b: usize,
    pub epsilon: f64,
    pub trials: usize,
    /// Fraction of trials with `δ_{k+b+1} < 1/sqrt(k-g+1)`; `None` without RIC verification.
    pub threshold_rate: Option<f64>,
    pub success_rate: f64,
    pub exact_rate: f64,
    /// Mean `||x - x_hat||_2` over trials that produced an estimate.
    pub mean_err_l2: f64,
    pub compliant_trials: usize,
    /// Success rate restricted to threshold- and magnitude-compliant trials.
    pub compliant_success_rate: Option<f64>,
    pub compliant_exact_rate: Option<f64>,
}

fn rate(hits: usize, total: usize) -> f64 {
    if total == 0 {
        f64::NAN
    } else {
        hits as f64 / total as f64
    }
}

pub fn aggregate(config: &TrialConfig, records: &[TrialRecord]) -> SweepRow {
    let total = records.len();
    let count = |pred: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| pred(r)).count();
    let compliant: Vec<&TrialRecord> = records.iter().filter(|r| r.compliant()).collect();
    let finite: Vec<f64> = records.iter().map(|r| r.error_l2).filter(|e| e.is_finite()).collect();
    let mean_err_l2 = if finite.is_empty() {
        f64::NAN
    } else {
        finite.iter().sum::<f64>() / finite.len() as f64
    };
    let conditional = |pred: &dyn Fn(&TrialRecord) -> bool| {
        (config.verify_ric && !compliant.is_empty())
            .then(|| rate(compliant.iter().filter(|r| pred(r)).count(), compliant.len()))
    };
    SweepRow {
        k: config.k,
        g: config.g,
        b: config.b,
        epsilon: config.noise_epsilon,
        trials: total,
        threshold_rate: config
            .verify_ric
            .then(|| rate(count(&|r| r.threshold_satisfied), total)),
        success_rate: rate(count(&|r| r.success), total),
        exact_rate: rate(count(&|r| r.exact_recovery), total),
        mean_err_l2,
        compliant_trials: compliant.len(),
        compliant_success_rate: conditional(&|r| r.success),
        compliant_exact_rate: conditional(&|r| r.exact_recovery),
    }
}

/// Runs every configuration (stream = position in `configs`) and aggregates.
pub fn run_sweep(spec: &EnsembleSpec, configs: &[TrialConfig]) -> Result<Vec<SweepRow>> {
    configs
        .iter()
        .enumerate()
        .map(|(i, config)| Ok(aggregate(config, &run_config(spec, config, i as u64)?)))
        .collect()
}

/// Violation counts of the noisy-case guarantees over compliant trials.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheckReport {
    pub trials: usize,
    pub compliant: usize,
    /// Compliant trials whose selections were not exactly `T \ T0` in `k - g` steps.
    pub support_violations: usize,
    /// Compliant trials with `||x - x_hat||_2 > ε / sqrt(1-δ)`.
    pub error_violations: usize,
    /// Compliant trials with `max_{T0 \ T} |x_hat_i| > ε / sqrt(1-δ)`.
    pub wrong_prior_violations: usize,
    /// Compliant trials with `min_{T ∩ T0} |x_hat_i| <= ε / sqrt(1-δ)`.
    pub correct_prior_violations: usize,
    /// Non-compliant trials that missed the remainder support (reported, no claim).
    pub noncompliant_support_failures: usize,
    pub records: Vec<TrialRecord>,
}

impl BoundCheckReport {
    pub fn total_violations(&self) -> usize {
        self.support_violations
            + self.error_violations
            + self.wrong_prior_violations
            + self.correct_prior_violations
    }
}

/// Noisy trials with exact `δ`, signals rescaled to `floor_factor` times the
/// sufficient magnitude floor, residual-threshold stopping at `ε`.
///
/// RIC verification is always on. A `floor_factor <= 1` deliberately breaks
/// the magnitude hypothesis; those trials are then non-compliant.
pub fn run_noisy_bound_check(
    spec: &EnsembleSpec,
    config: &TrialConfig,
    floor_factor: f64,
) -> Result<BoundCheckReport> {
    if !(floor_factor.is_finite() && floor_factor > 0.0) {
        return Err(Error::ConfigInfeasible(format!("floor factor {floor_factor}")));
    }
    let config = TrialConfig {
        verify_ric: true,
        ..*config
    };
    check_feasible(spec, &config)?;
    let records: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, &config, 0, t, Some(floor_factor)))
        .collect::<Result<_>>()?;

    let eps = config.noise_epsilon;
    let mut report = BoundCheckReport {
        trials: records.len(),
        compliant: 0,
        support_violations: 0,
        error_violations: 0,
        wrong_prior_violations: 0,
        correct_prior_violations: 0,
        noncompliant_support_failures: 0,
        records: Vec::new(),
    };
    for r in &records {
        if !r.compliant() {
            report.noncompliant_support_failures += usize::from(!r.remainder_recovered);
            continue;
        }
        report.compliant += 1;
        let delta = r.exact_delta.expect("verified trial carries delta");
        let bound = eps / (1.0 - delta).sqrt();
        report.support_violations += usize::from(!r.remainder_recovered);
        match r.diagnostics {
            Some(d) => {
                report.error_violations += usize::from(!(d.error_l2 <= bound));
                report.wrong_prior_violations += usize::from(!(d.max_wrong_prior <= bound));
                report.correct_prior_violations += usize::from(!(d.min_correct_prior > bound));
            }
            None => {
                report.error_violations += 1;
                report.wrong_prior_violations += 1;
                report.correct_prior_violations += 1;
            }
        }
    }
    report.records = records;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorComparisonRow {
    pub g: usize,
    pub b: usize,
    pub success_rate: f64,
    /// Plain OMP (`g = b = 0`) on the same matrices, supports and signals.
    pub baseline_success_rate: f64,
}

/// Noiseless success rate per `g` at fixed `k` and `b`, against the plain-OMP
/// baseline. All rows share one random stream.
pub fn prior_value_comparison(
    spec: &EnsembleSpec,
    k: usize,
    g_values: &[usize],
    b: usize,
    trials: usize,
) -> Result<Vec<PriorComparisonRow>> {
    if g_values.is_empty() {
        return Ok(Vec::new());
    }
    let success = |g: usize, b: usize| -> Result<f64> {
        let records = run_config(spec, &TrialConfig::noiseless(k, g, b, trials), 0)?;
        Ok(rate(records.iter().filter(|r| r.success).count(), records.len()))
    };
    let baseline = success(0, 0)?;
    g_values
        .iter()
        .map(|&g| {
            Ok(PriorComparisonRow {
                g,
                b,
                success_rate: success(g, b)?,
                baseline_success_rate: baseline,
            })
        })
        .collect()
}
