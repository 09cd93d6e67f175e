use anosov_core::actions::{minimal_polynomial, validate};
use anosov_core::freenil::{free_nilpotent_lift, witt_dimension};
use anosov_core::linalg::IntMatrix;
use anosov_core::normalforms::{sr_group_dimension, ContractionSpectrum, Convention};
use anosov_core::weyl::{coarse_classes, lyapunov_data, weyl_chambers};
use anosov_core::Config;

fn cartan() -> Vec<IntMatrix> {
    vec![
        IntMatrix::from_i64(&[&[0, 0, -1], &[1, 0, 3], &[0, 1, 0]]),
        IntMatrix::from_i64(&[&[-1, 0, -1], &[1, -1, 3], &[0, 1, -1]]),
    ]
}

#[test]
fn witt_dimension_table() {
    let two: Vec<usize> = (1..=6).map(|n| witt_dimension(2, n)).collect();
    assert_eq!(two, [2, 1, 2, 3, 6, 9]);
    let three: Vec<usize> = (1..=4).map(|n| witt_dimension(3, n)).collect();
    assert_eq!(three, [3, 3, 8, 18]);
}

#[test]
fn cartan_minimal_polynomials() {
    let g = cartan();
    assert_eq!(minimal_polynomial(&g[0]).to_string(), "x^3 - 3x + 1");
    assert_eq!(minimal_polynomial(&g[1]).to_string(), "x^3 + 3x^2 - 1");
}

#[test]
fn cartan_chamber_witnesses() {
    let cfg = Config::default();
    let g = cartan();
    let fs = lyapunov_data(&[g[0].to_q(), g[1].to_q()], cfg.precision_cap_bits).functionals;
    assert_eq!(coarse_classes(&fs, &cfg).unwrap().len(), 3);
    let w: Vec<Vec<i64>> = weyl_chambers(&fs, &cfg).unwrap().chambers.into_iter().map(|c| c.witness).collect();
    assert_eq!(w, [vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1], vec![1, -1], vec![1, 0]]);
}

#[test]
fn cartan_lift_grading() {
    let lift = free_nilpotent_lift(&validate(cartan()).unwrap(), 3, 10_000).unwrap();
    assert_eq!(lift.basis.dims, [3, 3, 8]);
}

#[test]
fn hand_counted_subresonance_dimensions() {
    let cfg = Config::default();
    let dim = |e: &[i64], m: &[usize], c| sr_group_dimension(&ContractionSpectrum::from_i64(e, m).unwrap(), c, &cfg).unwrap();
    assert_eq!(dim(&[-1, -2], &[1, 1], Convention::DiagonalLinear), 3);
    assert_eq!(dim(&[-1, -2], &[1, 1], Convention::AllJ), 4);
    assert_eq!(dim(&[-1, -2, -3], &[1, 1, 1], Convention::DiagonalLinear), 7);
    assert_eq!(dim(&[-1, -2, -3], &[1, 1, 1], Convention::AllJ), 10);
    assert_eq!(dim(&[-1, -2, -3], &[1, 1, 1], Convention::ExcludeSelf), 10);
    // linear blocks 1 + 4, and x1^2 into each rate -2 coordinate
    assert_eq!(dim(&[-1, -2], &[1, 2], Convention::DiagonalLinear), 7);
}
