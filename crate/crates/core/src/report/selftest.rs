//! Quick run of every independent oracle against the exact algorithms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::audit::{analyze, Status};
use super::file::ActionFile;
use super::fixtures;
use crate::actions::{is_semisimple, is_totally_reducible, validate};
use crate::config::Config;
use crate::exactnum::modulus::root_modulus_classes;
use crate::exactnum::rational::{pow2, q, to_f64, Q};
use num_traits::{One, Signed};
use crate::freenil::{free_nilpotent_lift, hall_basis, lift_is_anosov};
use crate::normalforms::{brute_force_dimension, sr_group_dimension, ContractionSpectrum, Convention};
use crate::oracle::{lyndon_count, root_moduli_sq};
use crate::samples::{random_commuting_pair, random_unimodular};
use crate::weyl::{weyl_chambers, LyapunovFunctional};

#[derive(Clone, Debug, Serialize)]
pub struct SelftestLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &'static str, failures: usize, total: usize) -> SelftestLine {
    SelftestLine {
        name,
        passed: failures == 0,
        detail: format!("{} of {total} cases agree", total - failures),
    }
}

fn witt_vs_lyndon() -> SelftestLine {
    let mut total = 0;
    let mut bad = 0;
    for d in 1..=4 {
        for k in 1..=4 {
            let b = hall_basis(d, k, 10_000).expect("small basis");
            for n in 1..=k {
                total += 1;
                if b.dims[n - 1] != lyndon_count(d, n) {
                    bad += 1;
                }
            }
        }
    }
    line("hall basis dimensions vs Lyndon words", bad, total)
}

fn moduli_vs_numeric(rng: &mut ChaCha8Rng) -> SelftestLine {
    let mut bad = 0;
    let total = 20;
    for _ in 0..total {
        let d = rand::Rng::gen_range(rng, 1..=4);
        let a = random_unimodular(rng, d, 3);
        let p = a.charpoly();
        let classes = root_modulus_classes(&p);
        let numeric = root_moduli_sq(&p, 40);
        let count: usize = classes.iter().map(|c| c.multiplicity()).sum();
        let covered = numeric.iter().all(|m| {
            classes.iter().any(|c| {
                c.refine(80);
                let iv = c.squared_enclosure();
                (to_f64(&iv.mid()) - to_f64(m)).abs() < 1e-12 * (1.0 + to_f64(m))
            })
        });
        if count != numeric.len() || !covered {
            bad += 1;
        }
    }
    line("root moduli vs fixed-point root finder", bad, total)
}

fn totally_reducible_vs_semisimple(rng: &mut ChaCha8Rng) -> SelftestLine {
    let total = 40;
    let mut bad = 0;
    for _ in 0..total {
        let (a, b) = random_commuting_pair(rng, 6, 3);
        let act = validate(vec![a, b]).expect("pair is valid");
        if is_totally_reducible(&act).totally_reducible != is_semisimple(&act) {
            bad += 1;
        }
    }
    line("total reducibility vs semisimplicity", bad, total)
}

/// Numeric lift criterion on squared moduli: no product of `n ≤ step`
/// of them, not all taken at one position, lies within `tol` of 1.
pub fn numeric_lift_is_anosov(moduli_sq: &[Q], step: usize, tol: &Q) -> bool {
    // `first` is the position of the first factor; `mixed` records whether
    // another position has been used.
    fn rec(m: &[Q], start: usize, left: usize, acc: &Q, first: Option<usize>, mixed: bool, tol: &Q) -> bool {
        for i in start..m.len() {
            let v = acc * &m[i];
            let mixed = mixed || first.is_some_and(|f| f != i);
            if (first.is_none() || mixed) && (&v - Q::one()).abs() < *tol {
                return false;
            }
            if left > 1 && !rec(m, i, left - 1, &v, first.or(Some(i)), mixed, tol) {
                return false;
            }
        }
        true
    }
    rec(moduli_sq, 0, step, &Q::one(), None, false, tol)
}

fn lift_vs_numeric(rng: &mut ChaCha8Rng) -> SelftestLine {
    let total = 20;
    let mut bad = 0;
    for t in 0..total {
        let d = rand::Rng::gen_range(rng, 1..=3);
        let step = 2 + t % 2;
        let a = random_unimodular(rng, d, 3);
        let act = validate(vec![a.clone()]).expect("unimodular");
        let lift = free_nilpotent_lift(&act, step, 10_000).expect("small lift");
        let m = root_moduli_sq(&a.charpoly(), 50);
        if lift_is_anosov(&lift, &[1]) != numeric_lift_is_anosov(&m, step, &pow2(-60)) {
            bad += 1;
        }
    }
    line("lift criterion vs eigenvalue products", bad, total)
}

fn subresonance_vs_brute_force() -> SelftestLine {
    let cfg = Config::default();
    let mut total = 0;
    let mut bad = 0;
    for l in 1..=3usize {
        let mut exps: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..l {
            exps = exps
                .into_iter()
                .flat_map(|e| (-4..=-1).map(move |x| [e.clone(), vec![x]].concat()))
                .collect();
        }
        for e in exps.into_iter().filter(|e| e.windows(2).all(|w| w[0] > w[1])) {
            for m in [vec![1; l], vec![2; l]] {
                let spec = ContractionSpectrum::from_i64(&e, &m).expect("valid spectrum");
                let qe: Vec<_> = e.iter().map(|&x| q(x)).collect();
                for conv in [Convention::DiagonalLinear, Convention::AllJ, Convention::ExcludeSelf] {
                    total += 1;
                    if sr_group_dimension(&spec, conv, &cfg).ok() != Some(brute_force_dimension(&qe, &m, conv)) {
                        bad += 1;
                    }
                }
            }
        }
    }
    line("subresonance dimension vs monomial count", bad, total)
}

fn chamber_law(rng: &mut ChaCha8Rng) -> SelftestLine {
    let cfg = Config::default();
    let total = 10;
    let mut bad = 0;
    for _ in 0..total {
        let n = rand::Rng::gen_range(rng, 1..=6);
        let mut dirs: Vec<(i64, i64)> = Vec::new();
        while dirs.len() < n {
            let v = (rand::Rng::gen_range(rng, -5..=5), rand::Rng::gen_range(rng, -5..=5));
            if v != (0, 0) && dirs.iter().all(|w| v.0 * w.1 != v.1 * w.0) {
                dirs.push(v);
            }
        }
        let fs: Vec<LyapunovFunctional> = dirs.iter().map(|&(a, b)| LyapunovFunctional::synthetic_i64(&[a, b])).collect();
        match weyl_chambers(&fs, &cfg) {
            Ok(dec) if dec.chambers.len() == 2 * n => {}
            _ => bad += 1,
        }
    }
    line("planar chamber count equals twice the line count", bad, total)
}

fn fixture_verdicts() -> SelftestLine {
    let cfg = Config::default();
    let expect = [
        (fixtures::CARTAN, 0),
        (fixtures::BLOCK_UNIPOTENT, 1),
        (fixtures::SYMPLECTIC, 1),
        (fixtures::FIBONACCI, 1),
        (fixtures::IDENTITY, 1),
    ];
    let mut bad = 0;
    for (text, code) in expect {
        let ok = ActionFile::parse(text)
            .and_then(|f| analyze(&f, &cfg))
            .map(|r| {
                let splits_ok = r.theorem_hypotheses != Status::True
                    || r.splittings
                        .iter()
                        .all(|s| s.as_ref().is_ok_and(|s| s.stable_sets_verified && s.fast_stable_e1.is_ok() && s.fast_stable_e2.is_ok()));
                r.exit_code() == code && splits_ok
            })
            .unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    line("shipped fixtures give their expected verdicts", bad, expect.len())
}

/// Every oracle comparison, seeded by `cfg.seed`.
pub fn selftest(cfg: &Config) -> Vec<SelftestLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    vec![
        witt_vs_lyndon(),
        moduli_vs_numeric(&mut rng),
        totally_reducible_vs_semisimple(&mut rng),
        lift_vs_numeric(&mut rng),
        subresonance_vs_brute_force(),
        chamber_law(&mut rng),
        fixture_verdicts(),
    ]
}
