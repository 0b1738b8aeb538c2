//! Orthogonal matching pursuit started from a prior support (`OMP_{T0}`).
//!
//! The loop initializes the estimated support with the prior `T0`, then
//! repeatedly picks the column most correlated with the current residual,
//! re-fits by least squares over the grown support and updates the residual.
//! With an empty prior this is plain OMP.

use crate::error::{Error, Result};
use crate::matrix::{check_len, least_squares, DenseMatrix, RealVector};
use crate::support::{contains, difference, intersection, IndexSet, PriorSupport, SparseSignal};

/// Two correlation magnitudes within this absolute distance are a tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingRule {
    /// Run exactly this many selections (fewer only if the candidates run out).
    FixedIterations(usize),
    /// Stop as soon as `||r||_2 <= epsilon`. Also capped at
    /// `min(m, n) - |T0|` selections.
    ResidualThreshold(f64),
}

/// Resolution of exact ties in the identification step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TieBreakPolicy {
    #[default]
    LowestIndex,
    HighestIndex,
    /// Prefer a tied index outside `truth ∪ prior`; falls back to the lowest
    /// tied index. Only meaningful for sharpness demonstrations.
    AdversarialOutside { truth: IndexSet, prior: IndexSet },
}

impl TieBreakPolicy {
    fn pick(&self, tied: &[usize]) -> usize {
        match self {
            TieBreakPolicy::LowestIndex => tied[0],
            TieBreakPolicy::HighestIndex => tied[tied.len() - 1],
            TieBreakPolicy::AdversarialOutside { truth, prior } => tied
                .iter()
                .copied()
                .find(|&i| !contains(truth, i) && !contains(prior, i))
                .unwrap_or(tied[0]),
        }
    }
}

/// Everything a run produced, iteration by iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryTrace {
    /// Signal dimension `n`.
    pub dimension: usize,
    /// `T0`, sorted.
    pub prior: IndexSet,
    /// `j_1, j_2, ...` in selection order; disjoint from the prior.
    pub selected: Vec<usize>,
    /// `||r^(t)||_2` for `t = 0..=iterations`.
    pub residual_norms: Vec<f64>,
    /// Whether the identification step of iteration `t + 1` saw a tie.
    pub ties: Vec<bool>,
    /// Dense estimate: least-squares coefficients on the final support, zero elsewhere.
    pub estimate: RealVector,
}

impl RecoveryTrace {
    pub fn iterations(&self) -> usize {
        self.selected.len()
    }

    /// `Λ_final = T0 ∪ {j_1, ..., j_t}`, sorted.
    pub fn final_support(&self) -> IndexSet {
        crate::support::union(&self.prior, &self.selected)
    }

    pub fn final_residual_norm(&self) -> f64 {
        *self.residual_norms.last().expect("trace always holds r^(0)")
    }
}

/// Runs `OMP_{T0}` on `y ≈ A x`.
pub fn omp_prior(
    a: &DenseMatrix,
    y: &RealVector,
    prior: &PriorSupport,
    stop: StoppingRule,
    tie: &TieBreakPolicy,
) -> Result<RecoveryTrace> {
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Err(Error::EmptyDictionary);
    }
    check_len(m, y.len())?;
    if let Some(&bad) = prior.indices().iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let budget = match stop {
        StoppingRule::FixedIterations(count) => count.min(n - prior.len()),
        StoppingRule::ResidualThreshold(eps) => {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(Error::PreconditionViolated(format!(
                    "residual threshold must be finite and nonnegative, got {eps}"
                )));
            }
            m.min(n).saturating_sub(prior.len())
        }
    };

    let mut in_support = vec![false; n];
    let mut support: Vec<usize> = prior.indices().to_vec();
    for &i in &support {
        in_support[i] = true;
    }
    let (mut coeffs, mut residual) = fit(a, &support, y)?;
    let mut residual_norms = vec![residual.norm()];
    let mut selected = Vec::new();
    let mut ties = Vec::new();

    for _ in 0..budget {
        if let StoppingRule::ResidualThreshold(eps) = stop {
            if residual.norm() <= eps {
                break;
            }
        }
        let corr = a.correlate(&residual)?;
        let best = (0..n)
            .filter(|&i| !in_support[i])
            .map(|i| corr[i].abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..n)
            .filter(|&i| !in_support[i] && corr[i].abs() >= best - TIE_TOLERANCE)
            .collect();
        let j = tie.pick(&tied);
        ties.push(tied.len() > 1);
        selected.push(j);
        in_support[j] = true;
        support.push(j);
        (coeffs, residual) = fit(a, &support, y)?;
        residual_norms.push(residual.norm());
    }

    let mut estimate = RealVector::zeros(n);
    for (&i, &c) in support.iter().zip(coeffs.iter()) {
        estimate[i] = c;
    }
    let mut prior_sorted = prior.indices().to_vec();
    prior_sorted.sort_unstable();
    Ok(RecoveryTrace {
        dimension: n,
        prior: prior_sorted,
        selected,
        residual_norms,
        ties,
        estimate,
    })
}

fn fit(a: &DenseMatrix, support: &[usize], y: &RealVector) -> Result<(RealVector, RealVector)> {
    let basis = a.select_columns(support)?;
    let coeffs = least_squares(&basis, y)?;
    let residual = if support.is_empty() {
        y.clone()
    } else {
        y - basis.as_matrix() * &coeffs
    };
    Ok((coeffs, residual))
}

fn check_dimension(trace: &RecoveryTrace, truth: &SparseSignal) -> Result<()> {
    check_len(truth.dimension(), trace.dimension)
}

/// Success in the `k - g` step sense: each of the first `k - g` selections
/// lies in the remainder support `T \ T0`.
pub fn success_check(
    trace: &RecoveryTrace,
    truth: &SparseSignal,
    prior: &PriorSupport,
) -> Result<bool> {
    check_dimension(trace, truth)?;
    let remainder = difference(truth.support(), prior.indices());
    let needed = remainder.len();
    Ok(trace.selected.len() >= needed
        && trace.selected[..needed]
            .iter()
            .all(|&j| contains(&remainder, j)))
}

/// `||x_hat - x||_inf <= tol`.
pub fn exact_recovery_check(trace: &RecoveryTrace, truth: &SparseSignal, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_dimension(trace, truth)?;
    Ok((&trace.estimate - truth.to_dense()).amax() <= tol)
}

/// Estimate quality figures for the noisy-case bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateDiagnostics {
    /// `min_{i ∈ T ∩ T0} |x_hat_i|`, `+inf` when `T ∩ T0` is empty.
    pub min_correct_prior: f64,
    /// `max_{i ∈ T0 \ T} |x_hat_i|`, `0` when `T0 \ T` is empty.
    pub max_wrong_prior: f64,
    /// `||x - x_hat||_2`.
    pub error_l2: f64,
}

pub fn support_estimate_diagnostics(
    trace: &RecoveryTrace,
    truth: &SparseSignal,
    prior: &PriorSupport,
) -> Result<EstimateDiagnostics> {
    check_dimension(trace, truth)?;
    let x_hat = &trace.estimate;
    let correct = intersection(truth.support(), prior.indices());
    let wrong = difference(prior.indices(), truth.support());
    let min_correct_prior = correct
        .iter()
        .map(|&i| x_hat[i].abs())
        .fold(f64::INFINITY, f64::min);
    let max_wrong_prior = wrong.iter().map(|&i| x_hat[i].abs()).fold(0.0, f64::max);
    let error_l2 = (x_hat - truth.to_dense()).norm();
    Ok(EstimateDiagnostics {
        min_correct_prior,
        max_wrong_prior,
        error_l2,
    })
}
