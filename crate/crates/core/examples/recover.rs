//! Recover a sparse vector from noisy measurements, with and without a
//! partially wrong prior support.
//!
//! cargo run --example recover

use omp_prior::greedy::{success_check, support_estimate_diagnostics};
use omp_prior::harness::{draw_matrix, EnsembleSpec, MatrixFamily};
use omp_prior::{omp_prior, PriorSupport, RealVector, SparseSignal, StoppingRule, TieBreakPolicy};
use rand::SeedableRng;

fn main() -> omp_prior::Result<()> {
    let (m, n) = (32, 40);
    let spec = EnsembleSpec { rows: m, cols: n, family: MatrixFamily::GaussianNormalizedColumns, seed: 3 };
    let a = draw_matrix(&spec, &mut rand_chacha::ChaCha8Rng::seed_from_u64(3))?;

    let truth = SparseSignal::new(n, vec![2, 9, 17, 23, 31], vec![1.5, -2.0, 1.0, 2.5, -1.2])?;
    let eps = 0.01;
    let noise = RealVector::from_fn(m, |i, _| if i % 2 == 0 { eps / (m as f64).sqrt() } else { -eps / (m as f64).sqrt() });
    let y = a.apply(&truth.to_dense())? + noise;

    for prior in [vec![], vec![9, 23], vec![5, 9, 23]] {
        let prior = PriorSupport::new(prior, n)?;
        let trace = omp_prior(&a, &y, &prior, StoppingRule::ResidualThreshold(eps), &TieBreakPolicy::LowestIndex)?;
        let d = support_estimate_diagnostics(&trace, &truth, &prior)?;
        println!(
            "prior {:?}: picked {:?} in {} steps, success {}, |x - x_hat| = {:.2e}",
            prior.indices(),
            trace.selected,
            trace.iterations(),
            success_check(&trace, &truth, &prior)?,
            d.error_l2
        );
    }
    Ok(())
}
