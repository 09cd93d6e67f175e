use std::collections::BTreeSet;

use anosov_core::actions::is_anosov_matrix;
use anosov_core::exactnum::rational::{q, qr, Interval, Q};
use anosov_core::freenil::FreeNilpotentAlgebra;
use anosov_core::linalg::IntMatrix;
use anosov_core::normalforms::{sr_group_dimension, subresonance_indices, ContractionSpectrum, Convention};
use anosov_core::samples::random_unimodular;
use anosov_core::weyl::{is_tns, lyapunov_data, stable_set, LyapunovFunctional};
use anosov_core::{compare_moduli, root_modulus_classes, Config, Error, IntPolynomial, OrderingVerdict};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unimodular(seed: u64, d: usize) -> IntMatrix {
    random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), d, 3)
}

fn cartan_functionals() -> Vec<LyapunovFunctional> {
    let c = IntMatrix::from_i64(&[&[0, 0, -1], &[1, 0, 3], &[0, 1, 0]]);
    let b = IntMatrix::from_i64(&[&[-1, 0, -1], &[1, -1, 3], &[0, 1, -1]]);
    lyapunov_data(&[c.to_q(), b.to_q()], Config::default().precision_cap_bits).functionals
}

fn ratio() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| qr(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn interval_arithmetic_contains_point_results(a in ratio(), b in ratio(), wa in 0i64..5, wb in 0i64..5) {
        let ia = Interval::new(&a - qr(wa, 9), &a + qr(wa, 9));
        let ib = Interval::new(&b - qr(wb, 9), &b + qr(wb, 9));
        prop_assert!(ia.add(&ib).contains(&(&a + &b)));
        prop_assert!(ia.sub(&ib).contains(&(&a - &b)));
        prop_assert!(ia.mul(&ib).contains(&(&a * &b)));
        prop_assert!(ia.round_out(8).contains(&a));
    }

    #[test]
    fn modulus_multiplicities_cover_the_nonzero_roots(coeffs in prop::collection::vec(-4i64..=4, 1..6), lead in 1i64..3) {
        let mut c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        c.push(BigInt::from(lead));
        let p = IntPolynomial::new(c);
        let total: usize = root_modulus_classes(&p).iter().map(|m| m.multiplicity()).sum();
        prop_assert_eq!(total, p.degree() - p.zero_root_multiplicity());
    }

    #[test]
    fn modulus_comparison_is_antisymmetric(seed in any::<u64>(), d in 2usize..=4) {
        let classes = root_modulus_classes(&unimodular(seed, d).charpoly());
        for x in &classes {
            for y in &classes {
                let xy = compare_moduli(x, y, 512);
                let yx = compare_moduli(y, x, 512);
                prop_assert_eq!(xy.reverse(), yx);
                if std::ptr::eq(x, y) {
                    prop_assert_eq!(xy, OrderingVerdict::Equal);
                }
            }
        }
    }

    #[test]
    fn anosov_is_inverse_invariant(seed in any::<u64>(), d in 1usize..=5) {
        let a = unimodular(seed, d);
        let inv = a.inverse_unimodular().unwrap();
        prop_assert_eq!(is_anosov_matrix(&a), is_anosov_matrix(&inv));
    }

    #[test]
    fn opposite_element_has_complementary_stable_set(b0 in -6i64..=6, b1 in -6i64..=6) {
        prop_assume!((b0, b1) != (0, 0));
        let fs = cartan_functionals();
        let cfg = Config::default();
        let plus = stable_set(&fs, &[b0, b1], &cfg);
        let minus = stable_set(&fs, &[-b0, -b1], &cfg);
        match (plus, minus) {
            (Ok(p), Ok(m)) => {
                let all: BTreeSet<usize> = (0..fs.len()).collect();
                prop_assert!(p.is_disjoint(&m));
                prop_assert_eq!(p.union(&m).cloned().collect::<BTreeSet<_>>(), all);
            }
            (Err(Error::SingularElement(_)), Err(Error::SingularElement(_))) => {}
            other => prop_assert!(false, "inconsistent results {:?}", other),
        }
    }

    #[test]
    fn tns_is_invariant_under_relabeling_and_base_change(
        dirs in prop::collection::vec((-5i64..=5, -5i64..=5), 1..6),
        seed in any::<u64>(),
    ) {
        prop_assume!(dirs.iter().all(|&d| d != (0, 0)));
        let cfg = Config::default();
        let fs: Vec<LyapunovFunctional> = dirs.iter().map(|&(a, b)| LyapunovFunctional::synthetic_i64(&[a, b])).collect();
        let base = is_tns(&fs, &cfg).unwrap().verdict;
        let mut rev = fs.clone();
        rev.reverse();
        prop_assert_eq!(is_tns(&rev, &cfg).unwrap().verdict, base);
        let m = unimodular(seed, 2);
        let e = |i: usize, j: usize| i64::try_from(m.get(i, j).clone()).unwrap();
        let moved: Vec<LyapunovFunctional> = dirs
            .iter()
            .map(|&(a, b)| LyapunovFunctional::synthetic_i64(&[a * e(0, 0) + b * e(1, 0), a * e(0, 1) + b * e(1, 1)]))
            .collect();
        prop_assert_eq!(is_tns(&moved, &cfg).unwrap().verdict, base);
    }

    #[test]
    fn lift_is_a_homomorphism(s1 in any::<u64>(), s2 in any::<u64>(), d in 1usize..=3, step in 2usize..=3) {
        let alg = FreeNilpotentAlgebra::new(d, step, 10_000).unwrap();
        let (a, b) = (unimodular(s1, d), unimodular(s2, d));
        let la = alg.lift_matrix(&a);
        let lb = alg.lift_matrix(&b);
        let lab = alg.lift_matrix(&a.mul(&b));
        prop_assert_eq!(&la[0], &a);
        for n in 0..step {
            prop_assert_eq!(&lab[n], &la[n].mul(&lb[n]));
        }
    }

    #[test]
    fn subresonance_dimension_is_scale_invariant(
        raw in prop::collection::btree_set(1i64..=8, 1..4),
        mults in prop::collection::vec(1usize..=2, 4),
        num in 1i64..=5,
        den in 1i64..=5,
    ) {
        let cfg = Config::default();
        let exps: Vec<Q> = raw.iter().map(|&x| q(-x)).collect();
        let m = &mults[..exps.len()];
        let scaled: Vec<Q> = exps.iter().map(|x| x * qr(num, den)).collect();
        for conv in [Convention::DiagonalLinear, Convention::AllJ, Convention::ExcludeSelf] {
            let a = sr_group_dimension(&ContractionSpectrum::exact(&exps, m).unwrap(), conv, &cfg).unwrap();
            let b = sr_group_dimension(&ContractionSpectrum::exact(&scaled, m).unwrap(), conv, &cfg).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn subresonances_are_triangular(raw in prop::collection::btree_set(1i64..=9, 1..5)) {
        let cfg = Config::default();
        let exps: Vec<Q> = raw.iter().map(|&x| q(-x)).collect();
        let spec = ContractionSpectrum::exact(&exps, &vec![1; exps.len()]).unwrap();
        for conv in [Convention::DiagonalLinear, Convention::AllJ, Convention::ExcludeSelf] {
            for ix in subresonance_indices(&spec, conv, &cfg).unwrap() {
                let linear_self = ix.degrees.iter().sum::<usize>() == 1 && ix.degrees[ix.target] == 1;
                if !linear_self {
                    prop_assert!(ix.degrees[ix.target..].iter().all(|&s| s == 0), "{:?}", ix);
                }
            }
        }
    }
}
