//! Restricted isometry constants and the recovery thresholds built on them.
//!
//! [`exact_ric`] enumerates every column subset of the requested order and
//! takes the worst spectral deviation of its Gram matrix from the identity:
//! `δ_s = max_{|S| = s} max(λ_max(A_S'A_S) - 1, 1 - λ_min(A_S'A_S))`.
//! This is exponential in the order and guarded by a subset budget.
//!
//! The threshold and magnitude formulas take `δ` from the caller; none of
//! them computes it behind the caller's back.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{least_squares, psd_extremes, DenseMatrix, RealVector};
use crate::support::{complement, contains, difference, union, IndexSet, PriorSupport, SparseSignal};
use nalgebra::DMatrix;

/// Default cap on the number of subsets [`exact_ric`] will enumerate.
pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RicReport {
    pub order: usize,
    /// `δ_order`. Values `>= 1` mean the RIP of this order fails.
    pub value: f64,
    /// Lexicographically first subset attaining `value`.
    pub witness: IndexSet,
    pub subsets_evaluated: u128,
}

impl RicReport {
    /// Whether `value < 1`, i.e. every `order`-column submatrix is injective.
    pub fn certifies_rip(&self) -> bool {
        self.value < 1.0
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exact `δ_order` of `a` with the default subset budget.
pub fn exact_ric(a: &DenseMatrix, order: usize) -> Result<RicReport> {
    exact_ric_with_budget(a, order, DEFAULT_SUBSET_BUDGET)
}

pub fn exact_ric_with_budget(a: &DenseMatrix, order: usize, budget: u128) -> Result<RicReport> {
    let n = a.cols();
    if order == 0 || order > n {
        return Err(Error::PreconditionViolated(format!(
            "RIC order must lie in [1, {n}], got {order}"
        )));
    }
    let required = binomial(n, order);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let gram = a.gram();

    // One work unit per leading index; each unit walks its subsets in
    // lexicographic order, so keeping the first strict maximum in unit order
    // reproduces the sequential witness.
    let partials: Vec<(f64, IndexSet, u128)> = (0..=n - order)
        .into_par_iter()
        .map(|first| scan_with_leading(&gram, first, order))
        .collect::<Result<_>>()?;

    let mut best = (f64::NEG_INFINITY, IndexSet::new());
    let mut evaluated = 0u128;
    for (value, witness, count) in partials {
        evaluated += count;
        if value > best.0 {
            best = (value, witness);
        }
    }
    Ok(RicReport {
        order,
        value: best.0,
        witness: best.1,
        subsets_evaluated: evaluated,
    })
}

fn scan_with_leading(gram: &DMatrix<f64>, first: usize, order: usize) -> Result<(f64, IndexSet, u128)> {
    let n = gram.nrows();
    let mut subset: Vec<usize> = (first..first + order).collect();
    let mut sub = DMatrix::<f64>::zeros(order, order);
    let mut best = (f64::NEG_INFINITY, IndexSet::new());
    let mut count = 0u128;
    loop {
        for (r, &i) in subset.iter().enumerate() {
            for (c, &j) in subset.iter().enumerate() {
                sub[(r, c)] = gram[(i, j)];
            }
        }
        let (lo, hi) = psd_extremes(&sub)?;
        let deviation = (hi - 1.0).max(1.0 - lo);
        count += 1;
        if deviation > best.0 {
            best = (deviation, subset.clone());
        }
        if !advance_tail(&mut subset, n) {
            break;
        }
    }
    Ok((best.0, best.1, count))
}

/// Next combination in lexicographic order keeping `subset[0]` fixed.
fn advance_tail(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut pos = k;
    while pos > 1 {
        pos -= 1;
        if subset[pos] < n - (k - pos) {
            subset[pos] += 1;
            for q in pos + 1..k {
                subset[q] = subset[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn check_counts(k: usize, g: usize) -> Result<()> {
    if g >= k {
        return Err(Error::InvalidCounts(format!(
            "need 0 <= g < k, got k = {k}, g = {g}"
        )));
    }
    Ok(())
}

/// `1 / sqrt(k - g + 1)`: `δ_{k+b+1}` strictly below this guarantees
/// recovery in `k - g` iterations, and no larger value does.
pub fn sharp_threshold(k: usize, g: usize, _b: usize) -> Result<f64> {
    check_counts(k, g)?;
    Ok(1.0 / ((k - g + 1) as f64).sqrt())
}

fn check_magnitude_inputs(delta: f64, k: usize, g: usize, epsilon: f64) -> Result<f64> {
    check_counts(k, g)?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "epsilon must be finite and nonnegative, got {epsilon}"
        )));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "delta must be finite and nonnegative, got {delta}"
        )));
    }
    let threshold = sharp_threshold(k, g, 0)?;
    if delta >= threshold {
        return Err(Error::ThresholdViolated { delta, threshold });
    }
    Ok(((k - g + 1) as f64).sqrt())
}

/// Minimum magnitude on `T \ T0` above which the residual-stopped run
/// recovers the remainder support under bounded noise:
/// `max{ sqrt(2(1+δ)) ε / (1 - sqrt(k-g+1) δ), 2ε / sqrt(1-δ) }`.
pub fn sufficient_min_magnitude(delta: f64, k: usize, g: usize, epsilon: f64) -> Result<f64> {
    let root = check_magnitude_inputs(delta, k, g, epsilon)?;
    let correlation_branch = (2.0 * (1.0 + delta)).sqrt() * epsilon / (1.0 - root * delta);
    let residual_branch = 2.0 * epsilon / (1.0 - delta).sqrt();
    Ok(correlation_branch.max(residual_branch))
}

/// Minimum magnitude on `T \ T0` that any successful noisy recovery must exceed:
/// `sqrt(1-δ) ε / (1 - sqrt(k-g+1) δ)`.
pub fn necessary_min_magnitude(delta: f64, k: usize, g: usize, epsilon: f64) -> Result<f64> {
    let root = check_magnitude_inputs(delta, k, g, epsilon)?;
    Ok((1.0 - delta).sqrt() * epsilon / (1.0 - root * delta))
}

/// Where the `δ` of a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSource {
    Supplied(f64),
    /// Compute `δ_{k+b+1}` by exhaustive enumeration.
    Exact,
}

/// Correlation gap of the noiseless residual at an intermediate support.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaGapReport {
    /// Iteration index `t = |Λ_t| - |T0|`.
    pub iteration: usize,
    /// Largest `|<A e_i, A z>|` over the undiscovered true indices `T \ Λ_t`.
    pub alpha1: f64,
    /// Largest `|<A e_i, A z>|` over indices outside `T ∪ T0`; 0 if there are none.
    pub beta1: f64,
    /// `(1 - sqrt(k-g-t+1) δ) ||z||_2 / sqrt(k-g-t)`.
    pub lower_bound: f64,
    /// `||z||_2` where `z = (x_{T\Λ}, -A_Λ^+ A_{T\Λ} x_{T\Λ})`.
    pub z_norm: f64,
    /// The `δ_{k+b+1}` the bound was evaluated with.
    pub delta: f64,
}

impl LemmaGapReport {
    pub fn gap(&self) -> f64 {
        self.alpha1 - self.beta1
    }
}

/// Evaluates the correlation-gap inequality at support `current` (`Λ_t`).
///
/// Requires `T0 ⊆ Λ_t ⊆ T ∪ T0` with at least one true index still
/// undiscovered, and `A_{Λ_t}` of full column rank.
pub fn lemma1_gap(
    a: &DenseMatrix,
    truth: &SparseSignal,
    prior: &PriorSupport,
    current: &[usize],
    delta: DeltaSource,
) -> Result<LemmaGapReport> {
    let n = a.cols();
    if truth.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: truth.dimension(),
        });
    }
    let t_set = truth.support();
    let t0 = prior.indices();
    let lambda = crate::support::normalize(current.to_vec());
    let joint = union(t_set, t0);
    if !t0.iter().all(|&i| contains(&lambda, i)) {
        return Err(Error::PreconditionViolated("current support must contain T0".into()));
    }
    if !lambda.iter().all(|&i| contains(&joint, i)) {
        return Err(Error::PreconditionViolated(
            "current support must lie inside T ∪ T0".into(),
        ));
    }
    let remaining = difference(t_set, &lambda);
    if remaining.is_empty() {
        return Err(Error::PreconditionViolated(
            "every true index is already selected".into(),
        ));
    }
    let k = truth.sparsity();
    let g = prior.correct_count(t_set);
    let b = prior.wrong_count(t_set);
    let iteration = lambda.len() - t0.len();
    let left = k - g - iteration;

    let x = truth.to_dense();
    let x_rem = RealVector::from_iterator(remaining.len(), remaining.iter().map(|&i| x[i]));
    let pushed = a.select_columns(&remaining)?.as_matrix() * &x_rem;
    let basis = a.select_columns(&lambda)?;
    let coeffs = least_squares(&basis, &pushed)?;
    let noiseless = if lambda.is_empty() {
        pushed
    } else {
        &pushed - basis.as_matrix() * &coeffs
    };
    let z_norm = (x_rem.norm_squared() + coeffs.norm_squared()).sqrt();

    let corr = a.correlate(&noiseless)?;
    let alpha1 = remaining.iter().map(|&i| corr[i].abs()).fold(0.0, f64::max);
    let beta1 = complement(&joint, n)
        .iter()
        .map(|&i| corr[i].abs())
        .fold(0.0, f64::max);

    let delta = match delta {
        DeltaSource::Supplied(d) => d,
        DeltaSource::Exact => exact_ric(a, k + b + 1)?.value,
    };
    let lower_bound =
        (1.0 - ((left + 1) as f64).sqrt() * delta) * z_norm / (left as f64).sqrt();
    Ok(LemmaGapReport {
        iteration,
        alpha1,
        beta1,
        lower_bound,
        z_norm,
        delta,
    })
}

/// The three integer conditions `k > 2c² - 1`, `(1 - 1/c²)(k+1) <= g < k`
/// and `1 <= b <= (c-2) ceil(k/2)`, in that order.
pub fn comparison_conditions(k: usize, g: usize, b: usize, c: usize) -> Result<[bool; 3]> {
    if c < 3 {
        return Err(Error::InvalidCounts(format!("comparison regime needs c >= 3, got {c}")));
    }
    let (k, g, b, c) = (k as u128, g as u128, b as u128, c as u128);
    let c2 = c * c;
    let sparsity = k + 1 > 2 * c2;
    // (1 - 1/c²)(k+1) <= g  <=>  (c² - 1)(k+1) <= g c²
    let prior_quality = (c2 - 1) * (k + 1) <= g * c2 && g < k;
    let wrong_budget = b >= 1 && b <= (c - 2) * k.div_ceil(2);
    Ok([sparsity, prior_quality, wrong_budget])
}

/// Whether `(k, g, b)` falls in the regime where `δ_{k+b+1} < 1/sqrt(k-g+1)`
/// is provably weaker than the plain-OMP condition `δ_{k+1} < 1/sqrt(k+1)`.
pub fn comparison_regime(k: usize, g: usize, b: usize, c: usize) -> Result<bool> {
    Ok(comparison_conditions(k, g, b, c)?.iter().all(|&ok| ok))
}
