//! Adversarial instances on which the recovery guarantees are tight.
//!
//! Indices are 0-based throughout. For counts `(k, g, b)` both instances
//! live in `R^{(k+b+1) x (k+b+1)}` with true support `T = {0, ..., k-1}`,
//! prior `T0 = {k-g, ..., k+b-1}` (so `T \ T0 = {0, ..., k-g-1}`), and a
//! single index `k+b` outside `T ∪ T0`.
//!
//! Both constructors verify the spectral facts they advertise before
//! returning; a failed self-check is an implementation bug.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{projection_residual, symmetric_eigenvalues, DenseMatrix, RealVector};
use crate::ric::{exact_ric, sharp_threshold};
use crate::support::{PriorSupport, SparseSignal};

/// Tolerance for the advertised spectrum and RIC of [`build_sharp`].
pub const SHARP_CHECK_TOL: f64 = 1e-10;
/// Tolerance for the RIC of [`build_necessary`].
pub const NECESSARY_RIC_TOL: f64 = 1e-9;
/// Tolerance for orthogonality identities in [`build_necessary`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// `A' P⊥_{T0} y`: correlations of every column with the initial residual.
pub fn first_residual_correlations(
    a: &DenseMatrix,
    y: &RealVector,
    prior: &PriorSupport,
) -> Result<RealVector> {
    let basis = a.select_columns(prior.indices())?;
    let r0 = projection_residual(&basis, y)?;
    a.correlate(&r0)
}

/// Rows completing `v / ||v||` to an orthonormal basis of `R^d`.
///
/// Deterministic: the coordinate vectors, minus the one most aligned with `v`
/// (lowest index on ties), are orthogonalized against `v` and each other in
/// index order with two passes of modified Gram-Schmidt. Returns a
/// `(d-1) x d` matrix, empty when `d = 1`.
pub fn orthonormal_completion(v: &RealVector) -> Result<DMatrix<f64>> {
    let d = v.len();
    let norm = v.norm();
    if d == 0 || !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let unit = v / norm;
    let skip = (0..d).fold(0, |best, i| if unit[i].abs() > unit[best].abs() { i } else { best });

    let mut basis: Vec<DVector<f64>> = vec![unit];
    for i in (0..d).filter(|&i| i != skip) {
        let mut w = DVector::zeros(d);
        w[i] = 1.0;
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&w);
                w.axpy(-proj, q, 1.0);
            }
        }
        let len = w.norm();
        basis.push(w / len);
    }
    let mut rows = DMatrix::zeros(d - 1, d);
    for (r, q) in basis.iter().skip(1).enumerate() {
        rows.set_row(r, &q.transpose());
    }
    Ok(rows)
}

fn check_counts(k: usize, g: usize) -> Result<()> {
    if k == 0 || g >= k {
        return Err(Error::InvalidCounts(format!(
            "need k >= 1 and 0 <= g < k, got k = {k}, g = {g}"
        )));
    }
    Ok(())
}

fn standard_supports(k: usize, g: usize, b: usize) -> Result<(Vec<usize>, PriorSupport)> {
    let n = k + b + 1;
    let prior = PriorSupport::new((k - g..k + b).collect(), n)?;
    Ok(((0..k).collect(), prior))
}

/// Instance attaining `δ_{k+b+1} = 1/sqrt(k-g+1)` on which the first
/// identification step is an exact tie between `T \ T0` and the outside index.
#[derive(Debug, Clone)]
pub struct SharpInstance {
    pub k: usize,
    pub g: usize,
    pub b: usize,
    pub matrix: DenseMatrix,
    /// All ones on `T`.
    pub signal: SparseSignal,
    pub prior: PriorSupport,
    pub advertised_delta: f64,
    /// Ascending.
    pub advertised_spectrum: Vec<f64>,
    /// Ascending eigenvalues of the assembled `A'A`.
    pub measured_spectrum: Vec<f64>,
    pub measured_delta: f64,
}

impl SharpInstance {
    pub fn measurements(&self) -> RealVector {
        self.matrix.as_matrix() * self.signal.to_dense()
    }

    /// The tied value `(k-g)/(k-g+1)`.
    pub fn tie_value(&self) -> f64 {
        let kg = (self.k - self.g) as f64;
        kg / (kg + 1.0)
    }

    /// The lone index outside `T ∪ T0`.
    pub fn outside_index(&self) -> usize {
        self.k + self.b
    }
}

/// Assembles the sharpness matrix
///
/// ```text
/// [ sqrt((k-g)/(k-g+1)) I_{k-g}   0          c 1_{k-g} ]
/// [ 0                             I_{g+b+1}            ]
/// ```
///
/// with `c = 1/sqrt((k-g+1)(k-g))` in the first `k-g` rows of the last
/// column (the last column's lower part is the last column of `I_{g+b+1}`).
pub fn build_sharp(k: usize, g: usize, b: usize) -> Result<SharpInstance> {
    check_counts(k, g)?;
    let kg = k - g;
    let n = k + b + 1;
    let kgf = kg as f64;
    let mut a = DMatrix::zeros(n, n);
    let diag = (kgf / (kgf + 1.0)).sqrt();
    let coupling = 1.0 / ((kgf + 1.0) * kgf).sqrt();
    for i in 0..kg {
        a[(i, i)] = diag;
        a[(i, n - 1)] = coupling;
    }
    for i in kg..n {
        a[(i, i)] = 1.0;
    }
    let matrix = DenseMatrix::new(a)?;
    let (truth, prior) = standard_supports(k, g, b)?;
    let signal = SparseSignal::new(n, truth, vec![1.0; k])?;

    let advertised_delta = sharp_threshold(k, g, b)?;
    let mut advertised_spectrum = Vec::with_capacity(n);
    advertised_spectrum.extend(std::iter::repeat_n(kgf / (kgf + 1.0), kg - 1));
    advertised_spectrum.extend(std::iter::repeat_n(1.0, g + b));
    advertised_spectrum.push(1.0 - advertised_delta);
    advertised_spectrum.push(1.0 + advertised_delta);
    advertised_spectrum.sort_by(f64::total_cmp);

    let measured_spectrum = symmetric_eigenvalues(&matrix.gram())?;
    if let Some((i, (m, e))) = measured_spectrum
        .iter()
        .zip(&advertised_spectrum)
        .enumerate()
        .find(|(_, (m, e))| (*m - *e).abs() > SHARP_CHECK_TOL)
    {
        return Err(Error::SelfCheckFailed(format!(
            "sharp ({k},{g},{b}): eigenvalue {i} is {m}, expected {e}"
        )));
    }
    let measured_delta = exact_ric(&matrix, n)?.value;
    if (measured_delta - advertised_delta).abs() > SHARP_CHECK_TOL {
        return Err(Error::SelfCheckFailed(format!(
            "sharp ({k},{g},{b}): RIC {measured_delta}, expected {advertised_delta}"
        )));
    }
    Ok(SharpInstance {
        k,
        g,
        b,
        matrix,
        signal,
        prior,
        advertised_delta,
        advertised_spectrum,
        measured_spectrum,
        measured_delta,
    })
}

/// Noisy instance `y = A x + v` whose remainder entries sit exactly at the
/// necessary magnitude `θ`, making the first identification step a tie.
#[derive(Debug, Clone)]
pub struct NecessaryInstance {
    pub k: usize,
    pub g: usize,
    pub b: usize,
    pub delta: f64,
    pub epsilon: f64,
    /// `θ = sqrt(1-δ) ε / (1 - sqrt(k-g+1) δ)`.
    pub theta: f64,
    /// `η = (sqrt(k-g+1) - 1) / sqrt(k-g)`.
    pub eta: f64,
    /// Common value `(1 - δ/sqrt(k-g+1)) θ` of the first-step correlations on `T \ T0`.
    pub mu: f64,
    /// Orthogonal factor `U`.
    pub rotation: DMatrix<f64>,
    /// Diagonal of `D`.
    pub scaling: DVector<f64>,
    /// `A = D U`.
    pub matrix: DenseMatrix,
    /// `θ` on `T \ T0`, 1 on `T ∩ T0`.
    pub signal: SparseSignal,
    pub noise: RealVector,
    pub prior: PriorSupport,
}

impl NecessaryInstance {
    pub fn measurements(&self) -> RealVector {
        self.matrix.as_matrix() * self.signal.to_dense() + &self.noise
    }

    pub fn outside_index(&self) -> usize {
        self.k + self.b
    }

    /// Closed-form first-step correlation for the outside index:
    /// `-((k-g)/sqrt(k-g+1)) δ θ - sqrt(1-δ) ε`.
    pub fn outside_correlation(&self) -> f64 {
        let kg = (self.k - self.g) as f64;
        -(kg / (kg + 1.0).sqrt()) * self.delta * self.theta - (1.0 - self.delta).sqrt() * self.epsilon
    }
}

/// Builds the necessary-condition instance `A = D U` for the given `δ` and `ε`.
///
/// `U` stacks the completion rows `ξ^(1..k-g-1)` (zero-padded), the row
/// mixing `1_{k-g}/sqrt(k-g)` with the last coordinate through `η`, the
/// identity on the `g+b` prior coordinates, and the complementary mixing
/// row. `D` is `sqrt(1+δ)` everywhere except `sqrt(1-δ)` at row `k-g-1`.
pub fn build_necessary(
    k: usize,
    g: usize,
    b: usize,
    delta: f64,
    epsilon: f64,
) -> Result<NecessaryInstance> {
    check_counts(k, g)?;
    let threshold = sharp_threshold(k, g, b)?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "delta must be finite and nonnegative, got {delta}"
        )));
    }
    if delta >= threshold {
        return Err(Error::ThresholdViolated { delta, threshold });
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "epsilon must be finite and positive, got {epsilon}"
        )));
    }
    let kg = k - g;
    let n = k + b + 1;
    let kgf = kg as f64;
    let root = (kgf + 1.0).sqrt();
    let eta = (root - 1.0) / kgf.sqrt();
    let hyp = (eta * eta + 1.0).sqrt();

    let completion = orthonormal_completion(&DVector::from_element(kg, 1.0))?;
    let mut u = DMatrix::zeros(n, n);
    for r in 0..kg - 1 {
        for c in 0..kg {
            u[(r, c)] = completion[(r, c)];
        }
    }
    let spread = 1.0 / (kgf * (eta * eta + 1.0)).sqrt();
    for c in 0..kg {
        u[(kg - 1, c)] = spread;
        u[(n - 1, c)] = eta * spread;
    }
    u[(kg - 1, n - 1)] = eta / hyp;
    u[(n - 1, n - 1)] = -1.0 / hyp;
    for i in kg..n - 1 {
        u[(i, i)] = 1.0;
    }

    let mut scaling = DVector::from_element(n, (1.0 + delta).sqrt());
    scaling[kg - 1] = (1.0 - delta).sqrt();
    let matrix = DenseMatrix::new(DMatrix::from_diagonal(&scaling) * &u)?;

    let theta = (1.0 - delta).sqrt() * epsilon / (1.0 - root * delta);
    let mu = (1.0 - delta / root) * theta;
    let (truth, prior) = standard_supports(k, g, b)?;
    let values = (0..k).map(|i| if i < kg { theta } else { 1.0 }).collect();
    let signal = SparseSignal::new(n, truth, values)?;

    let mut noise = RealVector::zeros(n);
    noise[kg - 1] = -eta * epsilon / hyp;
    noise[n - 1] = ((1.0 - delta) / (1.0 + delta)).sqrt() * epsilon / hyp;

    let instance = NecessaryInstance {
        k,
        g,
        b,
        delta,
        epsilon,
        theta,
        eta,
        mu,
        rotation: u,
        scaling,
        matrix,
        signal,
        noise,
        prior,
    };
    verify_necessary(&instance)?;
    Ok(instance)
}

fn verify_necessary(inst: &NecessaryInstance) -> Result<()> {
    let n = inst.matrix.cols();
    let kg = inst.k - inst.g;
    let label = format!("necessary ({},{},{})", inst.k, inst.g, inst.b);

    let defect = (inst.rotation.tr_mul(&inst.rotation) - DMatrix::identity(n, n)).amax();
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::SelfCheckFailed(format!("{label}: ||U'U - I|| = {defect:e}")));
    }
    let ric = exact_ric(&inst.matrix, n)?.value;
    if (ric - inst.delta).abs() > NECESSARY_RIC_TOL {
        return Err(Error::SelfCheckFailed(format!(
            "{label}: RIC {ric}, expected {}",
            inst.delta
        )));
    }
    // ||v|| equals ε exactly when δ = 0; allow rounding there.
    if inst.noise.norm() > inst.epsilon * (1.0 + 8.0 * f64::EPSILON) {
        return Err(Error::SelfCheckFailed(format!(
            "{label}: ||v|| = {} exceeds ε = {}",
            inst.noise.norm(),
            inst.epsilon
        )));
    }
    let prior_cols = inst.matrix.select_columns(inst.prior.indices())?;
    let remainder: Vec<usize> = (0..kg).collect();
    let x = inst.signal.to_dense();
    let pushed = inst.matrix.select_columns(&remainder)?.as_matrix()
        * RealVector::from_iterator(kg, remainder.iter().map(|&i| x[i]));
    let signal_leak = prior_cols.as_matrix().tr_mul(&pushed);
    let noise_leak = prior_cols.as_matrix().tr_mul(&inst.noise);
    let leak = signal_leak.iter().chain(noise_leak.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    if leak > ORTHOGONALITY_TOL {
        return Err(Error::SelfCheckFailed(format!(
            "{label}: prior columns not orthogonal to signal/noise ({leak:e})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn is_orthonormal_completion(v: &RealVector) {
        let rows = orthonormal_completion(v).unwrap();
        let d = v.len();
        let mut full = DMatrix::zeros(d, d);
        for r in 0..d - 1 {
            full.set_row(r, &rows.row(r));
        }
        full.set_row(d - 1, &(v / v.norm()).transpose());
        let defect = (&full * full.transpose() - DMatrix::identity(d, d)).amax();
        assert!(defect <= 1e-12, "defect {defect:e}");
    }

    #[test]
    fn completion_of_unit_vector() {
        let rows = orthonormal_completion(&RealVector::from_column_slice(&[1.0, 0.0])).unwrap();
        assert_eq!(rows.shape(), (1, 2));
        assert_abs_diff_eq!(rows[(0, 0)], 0.0);
        assert_abs_diff_eq!(rows[(0, 1)].abs(), 1.0);
    }

    #[test]
    fn completion_of_ones() {
        is_orthonormal_completion(&RealVector::from_element(3, 1.0));
        is_orthonormal_completion(&RealVector::from_column_slice(&[0.3, -2.0, 0.0, 1e-3, 7.0]));
    }

    #[test]
    fn completion_edge_cases() {
        assert_eq!(orthonormal_completion(&RealVector::from_element(1, 2.0)).unwrap().nrows(), 0);
        assert_eq!(orthonormal_completion(&RealVector::zeros(3)), Err(Error::ZeroVector));
    }

    #[test]
    fn sharp_small_case() {
        let inst = build_sharp(2, 1, 0).unwrap();
        let s = 0.5f64.sqrt();
        let expected = [1.0 - s, 1.0, 1.0 + s];
        for (m, e) in inst.measured_spectrum.iter().zip(expected) {
            assert_abs_diff_eq!(*m, e, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(inst.measured_delta, s, epsilon = 1e-12);
    }

    #[test]
    fn sharp_rejects_bad_counts() {
        assert!(matches!(build_sharp(3, 3, 0), Err(Error::InvalidCounts(_))));
        assert!(matches!(build_sharp(0, 0, 0), Err(Error::InvalidCounts(_))));
    }

    #[test]
    fn necessary_rejects_bad_inputs() {
        assert!(matches!(build_necessary(4, 1, 1, 0.5, 0.1), Err(Error::ThresholdViolated { .. })));
        assert!(build_necessary(4, 1, 1, 0.2, 0.0).is_err());
        assert!(matches!(build_necessary(2, 2, 1, 0.1, 0.1), Err(Error::InvalidCounts(_))));
    }

    #[test]
    fn necessary_with_zero_delta() {
        let inst = build_necessary(3, 1, 0, 0.0, 0.2).unwrap();
        assert_abs_diff_eq!(inst.theta, 0.2, epsilon = 1e-15);
        assert!(inst.scaling.iter().all(|&d| d == 1.0));
    }

    #[test]
    fn necessary_single_remainder_index() {
        // k - g = 1: empty completion, finite η = sqrt(2) - 1.
        let inst = build_necessary(3, 2, 1, 0.3, 0.1).unwrap();
        assert_abs_diff_eq!(inst.eta, 2f64.sqrt() - 1.0, epsilon = 1e-15);
        let sharp = build_sharp(3, 2, 1).unwrap();
        assert_eq!(sharp.matrix.cols(), 5);
    }
}
