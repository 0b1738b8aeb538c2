//! The noisy lower-bound instance: with min |x_i| on T\T0 equal to theta the
//! first OMP step cannot tell a true index from a wrong one.
//!
//! cargo run --example necessary_demo -- 4 1 1 0.25 0.1

use omp_prior::constructions::{build_necessary, first_residual_correlations};
use omp_prior::ric::{necessary_min_magnitude, sufficient_min_magnitude};

fn main() -> omp_prior::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (k, g, b, delta, eps) = match &args[..] {
        [k, g, b, d, e] => (k.parse().unwrap(), g.parse().unwrap(), b.parse().unwrap(), d.parse().unwrap(), e.parse().unwrap()),
        _ => (4, 1, 1, 0.25, 0.1),
    };
    let inst = build_necessary(k, g, b, delta, eps)?;
    println!("theta = {:.6}, eta = {:.6}, |v| = {:.6} <= {eps}", inst.theta, inst.eta, inst.noise.norm());
    println!(
        "necessary floor {:.6}, sufficient floor {:.6}",
        necessary_min_magnitude(delta, k, g, eps)?,
        sufficient_min_magnitude(delta, k, g, eps)?
    );
    let corr = first_residual_correlations(&inst.matrix, &inst.measurements(), &inst.prior)?;
    for (i, c) in corr.iter().enumerate() {
        println!("{i:>3} {c:+.9}");
    }
    println!("mu = {:.9}, closed-form outside = {:+.9}", inst.mu, inst.outside_correlation());
    Ok(())
}
