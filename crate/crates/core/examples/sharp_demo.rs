//! The sharpness instance: the RIC sits exactly at 1/sqrt(k-g+1) and the first
//! step of OMP from the prior faces an exact tie with a wrong index.
//!
//! cargo run --example sharp_demo -- 4 1 1

use omp_prior::constructions::{build_sharp, first_residual_correlations};
use omp_prior::greedy::success_check;
use omp_prior::{omp_prior, StoppingRule, TieBreakPolicy};

fn main() -> omp_prior::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (k, g, b) = match args[..] {
        [k, g, b] => (k, g, b),
        _ => (4, 1, 1),
    };
    let inst = build_sharp(k, g, b)?;
    println!("k={k} g={g} b={b}: delta = {:.12} (advertised {:.12})", inst.measured_delta, inst.advertised_delta);
    println!("spectrum {:?}", inst.measured_spectrum);

    let y = inst.measurements();
    let corr = first_residual_correlations(&inst.matrix, &y, &inst.prior)?;
    println!("first correlations {:.6?}", corr.as_slice());
    println!("tie value {}", inst.tie_value());

    for (name, tie) in [
        ("lowest", TieBreakPolicy::LowestIndex),
        (
            "adversarial",
            TieBreakPolicy::AdversarialOutside {
                truth: inst.signal.support().to_vec(),
                prior: inst.prior.indices().to_vec(),
            },
        ),
    ] {
        let trace = omp_prior(&inst.matrix, &y, &inst.prior, StoppingRule::FixedIterations(k - g), &tie)?;
        let ok = success_check(&trace, &inst.signal, &inst.prior)?;
        println!("{name:>12}: picks {:?}, success {ok}", trace.selected);
    }
    Ok(())
}
