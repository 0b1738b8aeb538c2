//! Dense linear-algebra primitives for desk-scale problems.
//!
//! Everything here is a pure function over immutable inputs. Matrices are
//! column-major [`nalgebra`] storage behind the [`DenseMatrix`] newtype, which
//! guarantees finite entries and a non-degenerate shape.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Real column vector (measurements, residuals, coefficient vectors).
pub type RealVector = DVector<f64>;

/// A basis is rank deficient when its smallest Gram eigenvalue falls below
/// this fraction of the largest.
pub const RANK_TOLERANCE: f64 = 1e-12;

const EIGEN_MAX_SWEEPS: usize = 10_000;

/// Real matrix with finite entries.
///
/// Constructors reject empty shapes. The one exception is
/// [`DenseMatrix::select_columns`] with an empty index set, which yields a
/// `rows x 0` basis (the span of nothing) for use with
/// [`projection_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    data: DMatrix<f64>,
}

impl DenseMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape {
                rows,
                cols,
                reason: "rows and cols must both be at least 1".into(),
            });
        }
        for c in 0..cols {
            for r in 0..rows {
                if !data[(r, c)].is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { data })
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity of order zero");
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn column(&self, j: usize) -> RealVector {
        self.data.column(j).into_owned()
    }

    /// Columns `indices[0], indices[1], ...` in that order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<DenseMatrix> {
        let cols = self.cols();
        if let Some(&bad) = indices.iter().find(|&&j| j >= cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: cols,
            });
        }
        Ok(Self {
            data: self.data.select_columns(indices),
        })
    }

    /// `A'A`.
    pub fn gram(&self) -> DMatrix<f64> {
        self.data.tr_mul(&self.data)
    }

    /// `A v`.
    pub fn apply(&self, v: &RealVector) -> Result<RealVector> {
        check_len(self.cols(), v.len())?;
        Ok(&self.data * v)
    }

    /// `A' v`, i.e. the correlations of `v` with every column.
    pub fn correlate(&self, v: &RealVector) -> Result<RealVector> {
        check_len(self.rows(), v.len())?;
        Ok(self.data.tr_mul(v))
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = m.nrows();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_SWEEPS)
        .ok_or(Error::EigenFailure { dim })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure { dim });
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest and largest eigenvalues of a symmetric positive semidefinite
/// matrix, clamped at zero from below.
pub(crate) fn psd_extremes(gram: &DMatrix<f64>) -> Result<(f64, f64)> {
    let values = symmetric_eigenvalues(gram)?;
    let lo = values.first().copied().unwrap_or(0.0).max(0.0);
    let hi = values.last().copied().unwrap_or(0.0).max(0.0);
    Ok((lo, hi))
}

/// Extreme eigenvalues `(lambda_min, lambda_max)` of `sub' sub`.
pub fn gram_extremes(sub: &DenseMatrix) -> Result<(f64, f64)> {
    if sub.cols() == 0 {
        return Err(Error::InvalidShape {
            rows: sub.rows(),
            cols: 0,
            reason: "Gram extremes of an empty column set".into(),
        });
    }
    psd_extremes(&sub.gram())
}

fn ensure_full_rank(basis: &DenseMatrix) -> Result<()> {
    if basis.cols() > basis.rows() {
        return Err(Error::RankDeficient {
            lambda_min: 0.0,
            lambda_max: f64::NAN,
        });
    }
    let (lambda_min, lambda_max) = gram_extremes(basis)?;
    if !(lambda_min >= RANK_TOLERANCE * lambda_max) || lambda_max == 0.0 {
        return Err(Error::RankDeficient {
            lambda_min,
            lambda_max,
        });
    }
    Ok(())
}

/// Minimizer of `|| target - basis u ||_2` via a Householder QR of `basis`.
///
/// An empty basis yields an empty coefficient vector.
pub fn least_squares(basis: &DenseMatrix, target: &RealVector) -> Result<RealVector> {
    check_len(basis.rows(), target.len())?;
    if basis.cols() == 0 {
        return Ok(RealVector::zeros(0));
    }
    ensure_full_rank(basis)?;
    let qr = basis.as_matrix().clone().qr();
    let rhs = qr.q().tr_mul(target);
    let r = qr.r();
    r.solve_upper_triangular(&rhs).ok_or(Error::RankDeficient {
        lambda_min: 0.0,
        lambda_max: f64::NAN,
    })
}

/// `target - P target`, where `P` projects onto the span of `basis`.
pub fn projection_residual(basis: &DenseMatrix, target: &RealVector) -> Result<RealVector> {
    check_len(basis.rows(), target.len())?;
    if basis.cols() == 0 {
        return Ok(target.clone());
    }
    let coeffs = least_squares(basis, target)?;
    Ok(target - basis.as_matrix() * coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn col(entries: &[f64]) -> RealVector {
        RealVector::from_column_slice(entries)
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(
            DenseMatrix::new(DMatrix::zeros(0, 3)),
            Err(Error::InvalidShape { .. })
        ));
        assert_eq!(
            DenseMatrix::from_row_slice(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        );
        assert!(matches!(
            DenseMatrix::from_row_slice(2, 2, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn column_selection_preserves_order() {
        let a = DenseMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let s = a.select_columns(&[2, 0]).unwrap();
        assert_eq!(s.column(0), a.column(2));
        assert_eq!(s.column(1), a.column(0));
        assert!(a.select_columns(&[3]).is_err());
        assert_eq!(a.select_columns(&[]).unwrap().cols(), 0);
    }

    #[test]
    fn least_squares_on_unit_column() {
        let basis = DenseMatrix::from_row_slice(2, 1, &[1.0, 0.0]).unwrap();
        let u = least_squares(&basis, &col(&[3.0, 5.0])).unwrap();
        assert_abs_diff_eq!(u[0], 3.0, epsilon = 1e-15);
    }

    #[test]
    fn least_squares_on_identity() {
        let u = least_squares(&DenseMatrix::identity(3), &col(&[1.0, 2.0, 3.0])).unwrap();
        assert_abs_diff_eq!(u, col(&[1.0, 2.0, 3.0]), epsilon = 1e-14);
    }

    #[test]
    fn least_squares_flags_rank_deficiency() {
        let basis = DenseMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            least_squares(&basis, &col(&[1.0, 1.0])),
            Err(Error::RankDeficient { .. })
        ));
        let wide = DenseMatrix::from_row_slice(1, 2, &[1.0, 2.0]).unwrap();
        assert!(matches!(
            least_squares(&wide, &col(&[1.0])),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn projection_residual_edge_cases() {
        let a = DenseMatrix::identity(2);
        let empty = a.select_columns(&[]).unwrap();
        assert_eq!(projection_residual(&empty, &col(&[1.0, 2.0])).unwrap(), col(&[1.0, 2.0]));
        let r = projection_residual(&a, &col(&[-4.0, 7.5])).unwrap();
        assert_abs_diff_eq!(r.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gram_extremes_simple() {
        let (lo, hi) = gram_extremes(&DenseMatrix::identity(3)).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-14);
        let d = DenseMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let (lo, hi) = gram_extremes(&d).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn eigenvalues_are_ascending() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let ev = symmetric_eigenvalues(&m).unwrap();
        let s = 2f64.sqrt();
        assert_abs_diff_eq!(ev[0], 2.0 - s, epsilon = 1e-13);
        assert_abs_diff_eq!(ev[1], 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(ev[2], 2.0 + s, epsilon = 1e-13);
    }
}
