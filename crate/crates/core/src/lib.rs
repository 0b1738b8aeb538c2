//! Orthogonal matching pursuit with partial support information.
//!
//! The crate provides
//!
//! - [`greedy::omp_prior`], OMP started from a prior support `T0`, with
//!   explicit stopping rules and tie resolution,
//! - [`ric::exact_ric`], restricted isometry constants by exhaustive subset
//!   search, together with the recovery thresholds that use them,
//! - [`constructions`], the adversarial instances on which those thresholds
//!   are attained,
//! - [`harness`], seeded Monte Carlo sweeps over random Gaussian ensembles,
//! - [`io`] and [`cli`], the plain-text file formats and the `omp-prior`
//!   command line front end.
//!
//! All indices are 0-based.

// Negated float comparisons below are deliberate: they treat NaN as failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constructions;
pub mod error;
pub mod greedy;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod ric;
pub mod support;

pub use error::{Error, Result};
pub use greedy::{omp_prior, RecoveryTrace, StoppingRule, TieBreakPolicy};
pub use matrix::{DenseMatrix, RealVector};
pub use ric::{exact_ric, RicReport};
pub use support::{PriorSupport, SparseSignal};
