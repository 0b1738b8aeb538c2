//! Noisy recovery with exact RIC per trial: count how often the support and
//! error bounds fail, first with magnitudes above the floor, then far below it.
//!
//! cargo run --release --example noisy_bounds

use omp_prior::harness::{run_noisy_bound_check, EnsembleSpec, MatrixFamily, NoiseModel, TrialConfig};

fn main() -> omp_prior::Result<()> {
    let spec = EnsembleSpec { rows: 64, cols: 12, family: MatrixFamily::GaussianNormalizedColumns, seed: 8 };
    let config = TrialConfig {
        noise_epsilon: 0.05,
        noise: NoiseModel::WorstCaseDirection,
        verify_ric: true,
        ..TrialConfig::noiseless(3, 2, 1, 300)
    };
    for factor in [1.5, 0.1] {
        let r = run_noisy_bound_check(&spec, &config, factor)?;
        println!(
            "floor x{factor}: {} trials, {} compliant, {} violations, {} non-compliant misses",
            r.trials,
            r.compliant,
            r.total_violations(),
            r.noncompliant_support_failures
        );
    }
    Ok(())
}
