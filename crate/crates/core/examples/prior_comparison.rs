//! How much a prior support helps plain OMP on the same random problems.
//!
//! cargo run --release --example prior_comparison

use omp_prior::harness::{prior_value_comparison, EnsembleSpec, MatrixFamily};
use omp_prior::ric::{comparison_regime, sharp_threshold};

fn main() -> omp_prior::Result<()> {
    let spec = EnsembleSpec { rows: 14, cols: 40, family: MatrixFamily::GaussianNormalizedColumns, seed: 11 };
    let k = 6;
    for row in prior_value_comparison(&spec, k, &[1, 2, 3, 4, 5], 1, 500)? {
        println!(
            "g={} b={}: success {:.3} (plain OMP {:.3}), threshold {:.4} vs {:.4}",
            row.g,
            row.b,
            row.success_rate,
            row.baseline_success_rate,
            sharp_threshold(k, row.g, row.b)?,
            sharp_threshold(k, 0, 0)?
        );
    }
    // Where the prior-aware condition is provably weaker than the plain one.
    for c in 3..=4 {
        let hits: Vec<_> = (2 * c * c..2 * c * c + 6).filter(|&k| comparison_regime(k, k - 1, 1, c).unwrap_or(false)).collect();
        println!("c={c}: k with (k, k-1, 1) in the comparison regime: {hits:?}");
    }
    Ok(())
}
