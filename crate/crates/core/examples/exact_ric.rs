//! Exact restricted isometry constants of a random matrix, order by order.
//!
//! cargo run --release --example exact_ric -- 10 16

use omp_prior::harness::{draw_matrix, EnsembleSpec, MatrixFamily};
use omp_prior::ric::{binomial, exact_ric_with_budget, DEFAULT_SUBSET_BUDGET};
use omp_prior::Error;
use rand::SeedableRng;

fn main() -> omp_prior::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (m, n) = match args[..] {
        [m, n] => (m, n),
        _ => (10, 16),
    };
    let spec = EnsembleSpec { rows: m, cols: n, family: MatrixFamily::GaussianNormalizedColumns, seed: 1 };
    let a = draw_matrix(&spec, &mut rand_chacha::ChaCha8Rng::seed_from_u64(1))?;
    for order in 1..=n {
        match exact_ric_with_budget(&a, order, DEFAULT_SUBSET_BUDGET) {
            Ok(r) => println!("delta_{order:<2} = {:.6}  witness {:?}  ({} subsets)", r.value, r.witness, r.subsets_evaluated),
            Err(Error::BudgetExceeded { required, .. }) => {
                println!("delta_{order:<2} skipped, needs {required} subsets");
            }
            Err(e) => return Err(e),
        }
    }
    println!("C({n}, {}) = {}", n / 2, binomial(n, n / 2));
    Ok(())
}
