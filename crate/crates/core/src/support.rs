//! Sparse signals, prior supports and the sorted index-set arithmetic they need.

use crate::error::{Error, Result};
use crate::matrix::RealVector;

/// Sorted, duplicate-free list of 0-based indices.
pub type IndexSet = Vec<usize>;

fn validate_index_set(indices: &[usize], dim: usize) -> Result<()> {
    for w in indices.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::PreconditionViolated(format!(
                "index set must be strictly increasing, found {} before {}",
                w[0], w[1]
            )));
        }
    }
    if let Some(&last) = indices.last() {
        if last >= dim {
            return Err(Error::IndexOutOfRange { index: last, dim });
        }
    }
    Ok(())
}

/// Sorts and deduplicates.
pub fn normalize(mut indices: Vec<usize>) -> IndexSet {
    indices.sort_unstable();
    indices.dedup();
    indices
}

pub fn contains(set: &[usize], i: usize) -> bool {
    set.binary_search(&i).is_ok()
}

pub fn intersection(a: &[usize], b: &[usize]) -> IndexSet {
    a.iter().copied().filter(|&i| contains(b, i)).collect()
}

/// `a \ b`.
pub fn difference(a: &[usize], b: &[usize]) -> IndexSet {
    a.iter().copied().filter(|&i| !contains(b, i)).collect()
}

pub fn union(a: &[usize], b: &[usize]) -> IndexSet {
    normalize(a.iter().chain(b.iter()).copied().collect())
}

/// `[0, dim) \ set`.
pub fn complement(set: &[usize], dim: usize) -> IndexSet {
    (0..dim).filter(|&i| !contains(set, i)).collect()
}

/// A `k`-sparse vector in `R^n`: its support and the nonzero values on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    dimension: usize,
    support: IndexSet,
    values: Vec<f64>,
}

impl SparseSignal {
    /// `support` must be strictly increasing; `values` must be finite and nonzero.
    pub fn new(dimension: usize, support: IndexSet, values: Vec<f64>) -> Result<Self> {
        validate_index_set(&support, dimension)?;
        if support.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v == 0.0) {
            return Err(Error::InvalidSignal(format!(
                "support values must be finite and nonzero, found {v}"
            )));
        }
        Ok(Self {
            dimension,
            support,
            values,
        })
    }

    /// Support and values read off a dense vector.
    pub fn from_dense(x: &RealVector) -> Result<Self> {
        let support: IndexSet = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
        let values = support.iter().map(|&i| x[i]).collect();
        Self::new(x.len(), support, values)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> RealVector {
        let mut x = RealVector::zeros(self.dimension);
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }

    /// Smallest magnitude over `support ∩ subset`; `+inf` if that set is empty.
    pub fn min_magnitude_on(&self, subset: &[usize]) -> f64 {
        self.support
            .iter()
            .zip(&self.values)
            .filter(|(i, _)| contains(subset, **i))
            .map(|(_, v)| v.abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min)
    }
}

/// Prior support `T0`. Its counts `g = |T ∩ T0|` and `b = |T0 \ T|` depend on
/// the true support and are computed on demand.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PriorSupport {
    indices: IndexSet,
}

impl PriorSupport {
    pub fn new(indices: IndexSet, dimension: usize) -> Result<Self> {
        validate_index_set(&indices, dimension)?;
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `g = |T ∩ T0|`.
    pub fn correct_count(&self, truth: &[usize]) -> usize {
        intersection(&self.indices, truth).len()
    }

    /// `b = |T0 \ T|`.
    pub fn wrong_count(&self, truth: &[usize]) -> usize {
        difference(&self.indices, truth).len()
    }
}
