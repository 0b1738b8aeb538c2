//! Noiseless success rate over a small (k, g) grid, written as CSV to stdout.
//!
//! cargo run --release --example phase_sweep > phase.csv

use omp_prior::harness::{run_sweep, EnsembleSpec, MatrixFamily, TrialConfig};
use omp_prior::io::write_sweep_csv;

fn main() -> omp_prior::Result<()> {
    let spec = EnsembleSpec { rows: 24, cols: 64, family: MatrixFamily::GaussianNormalizedColumns, seed: 2024 };
    let mut configs = Vec::new();
    for k in (4..=16).step_by(2) {
        for g in [0, k / 4, k / 2, 3 * k / 4] {
            configs.push(TrialConfig::noiseless(k, g, 2, 200));
        }
    }
    let rows = run_sweep(&spec, &configs)?;
    write_sweep_csv(std::io::stdout().lock(), &rows)
}
