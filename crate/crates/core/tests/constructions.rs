mod common;

use common::{jacobi_eigenvalues, Plain};
use omp_prior::constructions::{build_necessary, build_sharp, first_residual_correlations, orthonormal_completion};
use omp_prior::matrix::{gram_extremes, projection_residual};
use omp_prior::ric::{lemma1_gap, DeltaSource};
use omp_prior::{omp_prior, Error, RealVector, SparseSignal, StoppingRule, TieBreakPolicy};

#[test]
fn completion_of_ones() {
    let rows = orthonormal_completion(&RealVector::from_element(3, 1.0)).unwrap();
    assert_eq!(rows.shape(), (2, 3));
    let mut basis = rows.clone().insert_row(0, 0.0);
    for j in 0..3 {
        basis[(0, j)] = 1.0 / 3.0f64.sqrt();
    }
    let gram = &basis * basis.transpose();
    assert!((gram - nalgebra::DMatrix::<f64>::identity(3, 3)).amax() <= 1e-12);
}

#[test]
fn completion_edge_cases() {
    let one = orthonormal_completion(&RealVector::from_column_slice(&[1.0, 0.0])).unwrap();
    assert!((one[(0, 0)]).abs() < 1e-15 && (one[(0, 1)].abs() - 1.0).abs() < 1e-15);
    assert_eq!(orthonormal_completion(&RealVector::from_element(1, 2.0)).unwrap().nrows(), 0);
    assert_eq!(orthonormal_completion(&RealVector::zeros(3)), Err(Error::ZeroVector));
}

#[test]
fn sharp_initial_residual() {
    let inst = build_sharp(4, 1, 1).unwrap();
    let basis = inst.matrix.select_columns(inst.prior.indices()).unwrap();
    let r = projection_residual(&basis, &inst.measurements()).unwrap();
    let expected = [0.75f64.sqrt(), 0.75f64.sqrt(), 0.75f64.sqrt(), 0.0, 0.0, 0.0];
    for (a, b) in r.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(gram_extremes(&inst.matrix).map(|(l, h)| ((l - 0.5).abs() < 1e-12, (h - 1.5).abs() < 1e-12)), Ok((true, true)));
}

#[test]
fn sharp_gap_is_zero_at_the_threshold() {
    let inst = build_sharp(4, 1, 1).unwrap();
    let rep = lemma1_gap(&inst.matrix, &inst.signal, &inst.prior, inst.prior.indices(), DeltaSource::Supplied(0.5)).unwrap();
    assert!((rep.alpha1 - 0.75).abs() < 1e-12);
    assert!((rep.beta1 - 0.75).abs() < 1e-12);
    assert_eq!(rep.lower_bound, 0.0);
    let exact = lemma1_gap(&inst.matrix, &inst.signal, &inst.prior, inst.prior.indices(), DeltaSource::Exact).unwrap();
    assert!(exact.lower_bound.abs() < 1e-12);
}

#[test]
fn sharp_rejects_bad_counts() {
    assert!(matches!(build_sharp(3, 3, 0), Err(Error::InvalidCounts(_))));
    assert!(matches!(build_sharp(0, 0, 0), Err(Error::InvalidCounts(_))));
}

#[test]
fn degenerate_single_remaining_index() {
    // k - g = 1: no completion rows, eta = sqrt(2) - 1.
    let sharp = build_sharp(3, 2, 1).unwrap();
    assert!((sharp.measured_delta - 0.5f64.sqrt()).abs() < 1e-10);
    let nec = build_necessary(3, 2, 1, 0.3, 0.2).unwrap();
    assert!((nec.eta - (2.0f64.sqrt() - 1.0)).abs() < 1e-15);
    let y = nec.measurements();
    let corr = first_residual_correlations(&nec.matrix, &y, &nec.prior).unwrap();
    assert!((corr[0].abs() - corr[nec.outside_index()].abs()).abs() <= 1e-9 * nec.theta);
}

#[test]
fn necessary_spectrum_and_delta_zero() {
    let inst = build_necessary(5, 2, 1, 0.2, 0.1).unwrap();
    let all: Vec<usize> = (0..inst.matrix.cols()).collect();
    let ev = jacobi_eigenvalues(Plain::from_lib(&inst.matrix).sub_gram(&all));
    assert!((ev[0] - 0.8).abs() < 1e-12);
    assert!(ev[1..].iter().all(|e| (e - 1.2).abs() < 1e-12));

    let zero = build_necessary(4, 1, 1, 0.0, 0.1).unwrap();
    assert!((zero.theta - 0.1).abs() < 1e-15);
    assert!((zero.matrix.gram() - nalgebra::DMatrix::<f64>::identity(6, 6)).amax() < 1e-12);
}

#[test]
fn necessary_rejects_threshold_and_epsilon() {
    assert!(matches!(build_necessary(4, 1, 1, 0.5, 0.1), Err(Error::ThresholdViolated { .. })));
    assert!(build_necessary(4, 1, 1, 0.25, 0.0).is_err());
    assert!(build_necessary(4, 4, 1, 0.25, 0.1).is_err());
}

#[test]
fn bigger_magnitudes_break_the_tie_toward_the_truth() {
    for (k, g, b, d, e) in [(4, 1, 1, 0.25, 0.1), (6, 2, 2, 0.15, 0.05)] {
        let inst = build_necessary(k, g, b, d, e).unwrap();
        let x = inst.signal.to_dense();
        let bumped: Vec<f64> = x.iter().enumerate().map(|(i, v)| if i < k - g { v * (1.0 + 1e-3) } else { *v }).collect();
        let bumped = SparseSignal::from_dense(&RealVector::from_vec(bumped)).unwrap();
        let y = inst.matrix.apply(&bumped.to_dense()).unwrap() + &inst.noise;
        let corr = first_residual_correlations(&inst.matrix, &y, &inst.prior).unwrap();
        let inside = (0..k - g).map(|i| corr[i].abs()).fold(0.0, f64::max);
        assert!(inside > corr[k + b].abs());
        let adv = TieBreakPolicy::AdversarialOutside { truth: bumped.support().to_vec(), prior: inst.prior.indices().to_vec() };
        let trace = omp_prior(&inst.matrix, &y, &inst.prior, StoppingRule::FixedIterations(1), &adv).unwrap();
        assert!(trace.selected[0] < k - g);
    }
}
