//! Coarse Lyapunov classes, Lyapunov hyperplanes and the totally
//! non-symplectic test.

use num_traits::{Signed, Zero};

use super::functional::{proportionality, LyapunovFunctional, Proportionality};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::modulus::Verdict3;
use crate::exactnum::rational::{q, Q};

/// Functionals that are positive multiples of each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseClass {
    /// Indices into the functional list, in input order.
    pub members: Vec<usize>,
    /// Sum of member multiplicities.
    pub multiplicity: usize,
}

impl CoarseClass {
    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

/// Group functionals into coarse classes by positive proportionality.
pub fn coarse_classes(functionals: &[LyapunovFunctional], cfg: &Config) -> Result<Vec<CoarseClass>> {
    if functionals.iter().any(|f| f.is_zero()) {
        return Err(Error::NotAnosovAction);
    }
    let mut classes: Vec<CoarseClass> = Vec::new();
    for (i, f) in functionals.iter().enumerate() {
        let mut placed = false;
        for c in classes.iter_mut() {
            let r = c.representative();
            match proportionality(&functionals[r], f, cfg) {
                Proportionality::Positive { .. } => {
                    c.members.push(i);
                    c.multiplicity += f.multiplicity;
                    placed = true;
                    break;
                }
                Proportionality::Negative { .. } | Proportionality::NotProportional => {}
                Proportionality::Undecided { precision_bits } => {
                    return Err(Error::UndecidedProportionality(r, i, precision_bits));
                }
            }
        }
        if !placed {
            classes.push(CoarseClass {
                members: vec![i],
                multiplicity: f.multiplicity,
            });
        }
    }
    Ok(classes)
}

/// Kernel of one or more coarse classes, with the sign relating each
/// class to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub classes: Vec<(usize, i32)>,
}

impl Hyperplane {
    pub fn leading_class(&self) -> usize {
        self.classes[0].0
    }
}

/// Group coarse classes whose representatives are negatively proportional.
pub fn lyapunov_hyperplanes(
    functionals: &[LyapunovFunctional],
    classes: &[CoarseClass],
    cfg: &Config,
) -> Result<Vec<Hyperplane>> {
    let mut planes: Vec<Hyperplane> = Vec::new();
    'outer: for (ci, c) in classes.iter().enumerate() {
        for h in planes.iter_mut() {
            let lead = classes[h.leading_class()].representative();
            match proportionality(&functionals[lead], &functionals[c.representative()], cfg) {
                Proportionality::Negative { .. } => {
                    h.classes.push((ci, -1));
                    continue 'outer;
                }
                Proportionality::Positive { .. } | Proportionality::NotProportional => {}
                Proportionality::Undecided { precision_bits } => {
                    return Err(Error::UndecidedProportionality(lead, c.representative(), precision_bits));
                }
            }
        }
        planes.push(Hyperplane {
            classes: vec![(ci, 1)],
        });
    }
    Ok(planes)
}

/// Sign evaluation that is exact on points of the kernel when the
/// functional has a rational direction.
#[derive(Clone, Debug)]
pub struct SignOracle {
    functional: LyapunovFunctional,
    direction: Option<(i32, Vec<Q>)>,
}

impl SignOracle {
    pub fn new(f: &LyapunovFunctional, cfg: &Config) -> Self {
        let direction = f.rational_direction(cfg).and_then(|d| {
            let j0 = d.iter().position(|x| !x.is_zero())?;
            let s = f.values[j0].sign(cfg.precision_cap_bits)?;
            Some((s, d))
        });
        SignOracle {
            functional: f.clone(),
            direction,
        }
    }

    pub fn functional(&self) -> &LyapunovFunctional {
        &self.functional
    }

    pub fn sign(&self, b: &[Q], cap_bits: u32) -> Option<i32> {
        if let Some((s, d)) = &self.direction {
            let dot: Q = d.iter().zip(b).map(|(x, y)| x * y).sum();
            return Some(if dot.is_zero() {
                0
            } else if dot.is_positive() {
                *s
            } else {
                -*s
            });
        }
        self.functional.sign_at(b, cap_bits)
    }

    pub fn sign_i64(&self, b: &[i64], cap_bits: u32) -> Option<i32> {
        let bq: Vec<Q> = b.iter().map(|&x| q(x)).collect();
        self.sign(&bq, cap_bits)
    }
}

/// Outcome of the totally non-symplectic test.
#[derive(Clone, Debug)]
pub struct TnsReport {
    pub verdict: Verdict3,
    /// For each pair of coarse classes `(i, j)`, an element contracting both.
    pub witnesses: Vec<((usize, usize), Vec<i64>)>,
    /// A pair of negatively proportional classes, when one exists.
    pub opposite_pair: Option<(usize, usize)>,
}

fn unit_approx(f: &LyapunovFunctional) -> Vec<f64> {
    let v = f.approx();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Scale `dir` and round to a lattice point satisfying `accept`.
pub(crate) fn round_to_lattice(
    dir: &[f64],
    witness_cap: u64,
    mut accept: impl FnMut(&[i64]) -> bool,
) -> Result<Vec<i64>> {
    let m = dir.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m == 0.0 {
        return Err(Error::WitnessSearchExhausted(witness_cap));
    }
    let mut s: u64 = 1;
    loop {
        let b: Vec<i64> = dir.iter().map(|x| (x / m * s as f64).round() as i64).collect();
        if b.iter().any(|&x| x != 0) && accept(&b) {
            return Ok(b);
        }
        if s >= witness_cap {
            return Err(Error::WitnessSearchExhausted(witness_cap));
        }
        s = (s * 2).min(witness_cap);
    }
}

/// Bits used when certifying candidate lattice witnesses; rounding may land
/// on a kernel, so failures move on to the next scale.
pub(crate) const WITNESS_BITS: u32 = 256;

/// No two Lyapunov functionals are negatively proportional.
pub fn is_tns(functionals: &[LyapunovFunctional], cfg: &Config) -> Result<TnsReport> {
    let classes = coarse_classes(functionals, cfg)?;
    let reps: Vec<&LyapunovFunctional> = classes.iter().map(|c| &functionals[c.representative()]).collect();
    let oracles: Vec<SignOracle> = reps.iter().map(|f| SignOracle::new(f, cfg)).collect();
    let mut witnesses = Vec::new();
    let mut undecided = None;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            match proportionality(reps[i], reps[j], cfg) {
                Proportionality::Negative { .. } => {
                    return Ok(TnsReport {
                        verdict: Verdict3::False,
                        witnesses: vec![],
                        opposite_pair: Some((i, j)),
                    });
                }
                Proportionality::Undecided { precision_bits } => {
                    undecided = Some(precision_bits);
                    continue;
                }
                _ => {}
            }
            let (ui, uj) = (unit_approx(reps[i]), unit_approx(reps[j]));
            let dir: Vec<f64> = ui.iter().zip(&uj).map(|(a, b)| -(a + b)).collect();
            let b = round_to_lattice(&dir, cfg.witness_cap, |b| {
                oracles[i].sign_i64(b, WITNESS_BITS) == Some(-1) && oracles[j].sign_i64(b, WITNESS_BITS) == Some(-1)
            })?;
            witnesses.push(((i, j), b));
        }
    }
    let verdict = match undecided {
        Some(precision_bits) => Verdict3::Undecided { precision_bits },
        None => Verdict3::True,
    };
    Ok(TnsReport {
        verdict,
        witnesses,
        opposite_pair: None,
    })
}
