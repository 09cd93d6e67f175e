//! Stable sets, complementary splittings across a Lyapunov hyperplane and
//! elements contracting one side faster than a target class.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classes::{coarse_classes, is_tns, round_to_lattice, CoarseClass, SignOracle, WITNESS_BITS};
use super::functional::LyapunovFunctional;
use super::lp::max_margin;
use super::planar::PlanarArrangement;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::modulus::Verdict3;
use crate::exactnum::rational::{floor_dyadic, pow2, q, to_f64, Interval, Q};

/// Indices of the functionals that are negative at `b`.
pub fn stable_set(functionals: &[LyapunovFunctional], b: &[i64], cfg: &Config) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for (i, f) in functionals.iter().enumerate() {
        match SignOracle::new(f, cfg).sign_i64(b, cfg.precision_cap_bits) {
            Some(-1) => {
                out.insert(i);
            }
            Some(1) => {}
            _ => return Err(Error::SingularElement(cfg.precision_cap_bits)),
        }
    }
    Ok(out)
}

/// Splitting of the coarse classes other than `target` into the two sides
/// of its hyperplane, with witnesses for the four adjacent chambers.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub target: usize,
    /// The 2-plane of Z^k in which the chambers were found.
    pub plane: [Vec<i64>; 2],
    pub e1: BTreeSet<usize>,
    pub e2: BTreeSet<usize>,
    /// Stable set `e1 ∪ {target}`.
    pub a1: Vec<i64>,
    /// Stable set `e1`.
    pub c1: Vec<i64>,
    /// Stable set `e2 ∪ {target}`.
    pub a2: Vec<i64>,
    /// Stable set `e2`.
    pub c2: Vec<i64>,
}

const PLANE_DRAWS: usize = 64;
const PLANE_BITS: u32 = 512;

fn rank_two(p: &[Vec<i64>; 2]) -> bool {
    let k = p[0].len();
    (0..k).any(|i| (i + 1..k).any(|j| p[0][i] * p[1][j] != p[0][j] * p[1][i]))
}

fn class_oracles(functionals: &[LyapunovFunctional], classes: &[CoarseClass], cfg: &Config) -> Vec<SignOracle> {
    classes
        .iter()
        .map(|c| SignOracle::new(&functionals[c.representative()], cfg))
        .collect()
}

/// Complementary splitting across the hyperplane of coarse class `target`.
pub fn complementary_splitting(functionals: &[LyapunovFunctional], target: usize, cfg: &Config) -> Result<Splitting> {
    let tns = is_tns(functionals, cfg)?;
    match tns.verdict {
        Verdict3::True => {}
        Verdict3::False => return Err(Error::NotTns),
        Verdict3::Undecided { precision_bits } => return Err(Error::PrecisionExhausted(precision_bits)),
    }
    let classes = coarse_classes(functionals, cfg)?;
    if target >= classes.len() {
        return Err(Error::InvalidInput(format!("no coarse class {target}")));
    }
    let oracles = class_oracles(functionals, &classes, cfg);
    let k = functionals[0].rank();
    if k < 2 {
        return Err(Error::DegeneratePlane(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut arrangement = None;
    for draw in 0..PLANE_DRAWS {
        let basis: [Vec<i64>; 2] = if k == 2 && draw == 0 {
            [vec![1, 0], vec![0, 1]]
        } else {
            [
                (0..k).map(|_| rng.gen_range(-4..=4)).collect(),
                (0..k).map(|_| rng.gen_range(-4..=4)).collect(),
            ]
        };
        if !rank_two(&basis) {
            continue;
        }
        match PlanarArrangement::new(&oracles, basis, PLANE_BITS) {
            Ok(a) => {
                arrangement = Some(a);
                break;
            }
            Err(Error::DegeneratePlane(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let arr = arrangement.ok_or(Error::DegeneratePlane(PLANE_DRAWS))?;
    let n2 = arr.chamber_count();
    let p = arr.positions[target];
    let half = n2 / 2;
    let sector = |m: usize| arr.sector_witness(m % n2, cfg.witness_cap);
    let a1 = sector(p)?;
    let c1 = sector(p + n2 - 1)?;
    let a2 = sector(p + half - 1)?;
    let c2 = sector(p + half)?;
    let negatives = |m: usize| -> BTreeSet<usize> {
        (0..classes.len()).filter(|&l| arr.expected_sign(l, m % n2) < 0).collect()
    };
    let e1 = negatives(p + n2 - 1);
    let e2 = negatives(p + half);
    Ok(Splitting {
        target,
        plane: arr.basis.clone(),
        e1,
        e2,
        a1,
        c1,
        a2,
        c2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    E1,
    E2,
}

/// Element `b` with `χ(b) < ψ(b) < 0` for every `χ` on one side and `ψ` in
/// the target class.
#[derive(Clone, Debug)]
pub struct FastStable {
    pub element: Vec<i64>,
    /// Lower bound of `min (ψ(b) - χ(b))`.
    pub min_gap: f64,
    /// Upper bound of `max ψ(b)`.
    pub max_target: f64,
}

fn diff_enclosure(psi: &LyapunovFunctional, chi: Option<&LyapunovFunctional>, b: &[i64], bits: u32) -> Interval {
    let v = psi.evaluate_i64(b, bits);
    match chi {
        Some(c) => v.sub(&c.evaluate_i64(b, bits)),
        None => v.neg(),
    }
}

fn certified_positive(psi: &LyapunovFunctional, chi: Option<&LyapunovFunctional>, b: &[i64], cap: u32) -> bool {
    let mut bits = 32;
    loop {
        let iv = diff_enclosure(psi, chi, b, bits);
        if iv.sign() == Some(1) {
            return true;
        }
        if iv.sign() == Some(-1) || bits >= cap {
            return false;
        }
        bits *= 2;
    }
}

fn mids(f: &LyapunovFunctional, bits: u32) -> Vec<Q> {
    f.enclosures(bits).iter().map(|iv| floor_dyadic(&iv.mid(), bits)).collect()
}

pub fn fast_stable_element(
    functionals: &[LyapunovFunctional],
    splitting: &Splitting,
    side: Side,
    cfg: &Config,
) -> Result<FastStable> {
    let classes = coarse_classes(functionals, cfg)?;
    let targets: Vec<&LyapunovFunctional> = classes[splitting.target].members.iter().map(|&i| &functionals[i]).collect();
    let side_set = match side {
        Side::E1 => &splitting.e1,
        Side::E2 => &splitting.e2,
    };
    let others: Vec<&LyapunovFunctional> = side_set
        .iter()
        .flat_map(|&c| classes[c].members.iter().map(|&i| &functionals[i]))
        .collect();
    // pairs (ψ, Some(χ)) for ψ - χ > 0 and (ψ, None) for -ψ > 0
    let mut pairs: Vec<(&LyapunovFunctional, Option<&LyapunovFunctional>)> = Vec::new();
    for &psi in &targets {
        pairs.push((psi, None));
        for &chi in &others {
            pairs.push((psi, Some(chi)));
        }
    }
    let k = functionals[0].rank();
    let mut bits = 64;
    let cap = 512;
    loop {
        let rows: Vec<Vec<Q>> = pairs
            .iter()
            .map(|(psi, chi)| {
                let a = mids(psi, bits);
                match chi {
                    Some(c) => a.iter().zip(mids(c, bits)).map(|(x, y)| x - y).collect(),
                    None => a.iter().map(|x| -x.clone()).collect(),
                }
            })
            .collect();
        let (t, x) = max_margin(&rows, k);
        if t > pow2(-((bits / 2) as i64)) * q(k as i64 * 4) {
            let dir: Vec<f64> = x.iter().map(to_f64).collect();
            let b = round_to_lattice(&dir, cfg.witness_cap, |b| {
                pairs.iter().all(|(psi, chi)| certified_positive(psi, *chi, b, WITNESS_BITS))
            })?;
            let lo = |psi: &LyapunovFunctional, chi: Option<&LyapunovFunctional>| {
                to_f64(&diff_enclosure(psi, chi, &b, 64).lo)
            };
            let min_gap = pairs
                .iter()
                .filter(|(_, c)| c.is_some())
                .map(|(p, c)| lo(p, *c))
                .fold(f64::INFINITY, f64::min);
            let max_target = pairs
                .iter()
                .filter(|(_, c)| c.is_none())
                .map(|(p, _)| -lo(p, None))
                .fold(f64::NEG_INFINITY, f64::max);
            return Ok(FastStable {
                element: b,
                min_gap,
                max_target,
            });
        }
        if bits >= cap {
            return Err(Error::LpInfeasibleAtPrecision(cap));
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[i64]) -> LyapunovFunctional {
        LyapunovFunctional::synthetic_i64(v)
    }

    fn tri() -> Vec<LyapunovFunctional> {
        vec![f(&[1, 0]), f(&[0, 1]), f(&[-1, -1])]
    }

    #[test]
    fn stable_sets() {
        let fs = tri();
        let cfg = Config::default();
        assert_eq!(stable_set(&fs, &[-1, 2], &cfg).unwrap(), BTreeSet::from([0, 2]));
        assert_eq!(stable_set(&fs, &[1, -2], &cfg).unwrap(), BTreeSet::from([1]));
        assert_eq!(stable_set(&fs, &[1, -1], &cfg), Err(Error::SingularElement(cfg.precision_cap_bits)));
    }

    #[test]
    fn splitting_and_fast_elements() {
        let fs = tri();
        let cfg = Config::default();
        for target in 0..3 {
            let s = complementary_splitting(&fs, target, &cfg).unwrap();
            let with = |e: &BTreeSet<usize>| {
                let mut e = e.clone();
                e.insert(target);
                e
            };
            assert_eq!(stable_set(&fs, &s.c1, &cfg).unwrap(), s.e1);
            assert_eq!(stable_set(&fs, &s.c2, &cfg).unwrap(), s.e2);
            assert_eq!(stable_set(&fs, &s.a1, &cfg).unwrap(), with(&s.e1));
            assert_eq!(stable_set(&fs, &s.a2, &cfg).unwrap(), with(&s.e2));
            assert!(s.e1.is_disjoint(&s.e2));
            assert_eq!(s.e1.len() + s.e2.len(), 2);
            for side in [Side::E1, Side::E2] {
                let fsel = fast_stable_element(&fs, &s, side, &cfg).unwrap();
                assert!(fsel.min_gap > 0.0 && fsel.max_target < 0.0);
            }
        }
        let sym = vec![f(&[1, 0]), f(&[-1, 0]), f(&[0, 1])];
        assert!(matches!(complementary_splitting(&sym, 0, &cfg), Err(Error::NotTns)));
    }

    #[test]
    fn rank_three_plane() {
        let fs = vec![f(&[1, 0, 0]), f(&[0, 1, 0]), f(&[0, 0, 1]), f(&[-1, -1, -1])];
        let cfg = Config::default();
        let s = complementary_splitting(&fs, 0, &cfg).unwrap();
        assert_eq!(stable_set(&fs, &s.a1, &cfg).unwrap(), {
            let mut e = s.e1.clone();
            e.insert(0);
            e
        });
        assert_eq!(s.e1.len() + s.e2.len(), 3);
    }
}
