//! Subresonance relations of a contracting Lyapunov spectrum and the
//! dimension of the group of subresonance polynomial maps.

use num_integer::binomial;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::rational::{q, to_f64, Interval, Q};
use crate::weyl::LyapunovFunctional;

/// Which degree vectors `s` are admitted for a target block `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Linear part `s = e_i` only; nonlinear `s` with `χ_i ≤ Σ_j s_j χ_j`.
    #[default]
    DiagonalLinear,
    /// Every `s` with `χ_i ≤ Σ_j s_j χ_j`, including off-diagonal linear terms.
    AllJ,
    /// `s = e_i`, plus `s` with `s_i = 0` and `χ_i ≤ Σ_{j≠i} s_j χ_j`.
    ExcludeSelf,
}

/// One exponent of the spectrum.
#[derive(Clone, Debug)]
pub enum Exponent {
    Exact(Q),
    /// `χ(b)` for a functional `χ` and a lattice element `b`.
    Evaluated(Box<LyapunovFunctional>, Vec<i64>),
}

impl Exponent {
    fn enclosure(&self, bits: u32) -> Interval {
        match self {
            Exponent::Exact(v) => Interval::point(v.clone()),
            Exponent::Evaluated(f, b) => f.evaluate_i64(b, bits),
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, Exponent::Exact(_))
    }

    pub fn approx(&self) -> f64 {
        self.enclosure(64).to_f64_mid()
    }
}

/// Exact equality of two exponents, `None` when undecided at the cap.
fn values_equal(x: &Exponent, y: &Exponent, cap_bits: u32) -> Option<bool> {
    let mut bits = 32;
    loop {
        let (a, b) = (x.enclosure(bits), y.enclosure(bits));
        if a.separation(&b).is_some() {
            return Some(false);
        }
        if a.is_point() && b.is_point() {
            return Some(true);
        }
        if bits >= cap_bits {
            return None;
        }
        bits = (bits * 2).min(cap_bits);
    }
}

/// Distinct negative exponents `χ_1 > … > χ_l` with multiplicities.
#[derive(Clone, Debug)]
pub struct ContractionSpectrum {
    exponents: Vec<Exponent>,
    multiplicities: Vec<usize>,
}

/// Target block `i` and degree vector `s` (0-based `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubresonanceIndex {
    pub target: usize,
    pub degrees: Vec<usize>,
}

fn sign_at_cap(iv: impl Fn(u32) -> Interval, exact: bool, cap_bits: u32) -> Result<i32> {
    let mut bits = 32;
    loop {
        let v = iv(bits);
        if let Some(s) = v.sign() {
            if s != 0 || v.is_point() {
                return Ok(s);
            }
        }
        if exact || bits >= cap_bits {
            return Err(Error::UndecidedBoundary(cap_bits));
        }
        bits = (bits * 2).min(cap_bits);
    }
}

impl ContractionSpectrum {
    pub fn new(exponents: Vec<Exponent>, multiplicities: Vec<usize>, cap_bits: u32) -> Result<Self> {
        if exponents.is_empty() || exponents.len() != multiplicities.len() {
            return Err(Error::InvalidInput("exponents and multiplicities must be nonempty and of equal length".into()));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        for (i, e) in exponents.iter().enumerate() {
            if sign_at_cap(|b| e.enclosure(b), e.is_exact(), cap_bits)? >= 0 {
                return Err(Error::InvalidInput(format!("exponent {i} is not negative")));
            }
        }
        for i in 1..exponents.len() {
            let (x, y) = (&exponents[i - 1], &exponents[i]);
            let s = sign_at_cap(|b| x.enclosure(b).sub(&y.enclosure(b)), x.is_exact() && y.is_exact(), cap_bits)?;
            if s <= 0 {
                return Err(Error::InvalidInput("exponents must be strictly decreasing".into()));
            }
        }
        Ok(ContractionSpectrum {
            exponents,
            multiplicities,
        })
    }

    pub fn exact(exponents: &[Q], multiplicities: &[usize]) -> Result<Self> {
        Self::new(
            exponents.iter().cloned().map(Exponent::Exact).collect(),
            multiplicities.to_vec(),
            0,
        )
    }

    pub fn from_i64(exponents: &[i64], multiplicities: &[usize]) -> Result<Self> {
        Self::exact(&exponents.iter().map(|&x| q(x)).collect::<Vec<_>>(), multiplicities)
    }

    /// Negative values `χ(b)` of the functionals at `b`, merged when equal
    /// and sorted decreasingly.
    pub fn at_element(functionals: &[LyapunovFunctional], b: &[i64], cfg: &Config) -> Result<Self> {
        let cap = cfg.precision_cap_bits;
        let mut entries: Vec<(Exponent, usize)> = Vec::new();
        for f in functionals {
            let e = Exponent::Evaluated(Box::new(f.clone()), b.to_vec());
            if sign_at_cap(|bits| e.enclosure(bits), false, cap)? >= 0 {
                continue;
            }
            let mut merged = false;
            for (x, m) in entries.iter_mut() {
                if let Some(same) = values_equal(&e, x, cap) {
                    if same {
                        *m += f.multiplicity;
                        merged = true;
                        break;
                    }
                } else {
                    return Err(Error::UndecidedBoundary(cap));
                }
            }
            if !merged {
                entries.push((e, f.multiplicity));
            }
        }
        if entries.is_empty() {
            return Err(Error::InvalidInput("no exponent is negative at this element".into()));
        }
        let mut bits = 64;
        loop {
            let iv: Vec<Interval> = entries.iter().map(|(e, _)| e.enclosure(bits)).collect();
            let separated = (0..iv.len()).all(|i| (i + 1..iv.len()).all(|j| iv[i].separation(&iv[j]).is_some()));
            if separated {
                let mut order: Vec<usize> = (0..entries.len()).collect();
                order.sort_by(|&i, &j| iv[j].separation(&iv[i]).unwrap());
                let (exps, mults): (Vec<_>, Vec<_>) = order.into_iter().map(|i| entries[i].clone()).unzip();
                return Self::new(exps, mults, cap);
            }
            if bits >= cap {
                return Err(Error::UndecidedBoundary(cap));
            }
            bits = (bits * 2).min(cap);
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    fn all_exact(&self) -> bool {
        self.exponents.iter().all(Exponent::is_exact)
    }

    /// Sign of `Σ_j s_j χ_j - χ_i`.
    fn slack_sign(&self, i: usize, s: &[usize], cap_bits: u32) -> Result<i32> {
        let f = |bits: u32| {
            let mut acc = self.exponents[i].enclosure(bits).neg();
            for (j, &sj) in s.iter().enumerate() {
                if sj > 0 {
                    acc = acc.add(&self.exponents[j].enclosure(bits).scale(&q(sj as i64)));
                }
            }
            acc
        };
        sign_at_cap(f, self.all_exact(), cap_bits)
    }

    /// Largest total degree worth searching: `|χ_i| / min_j |χ_j|`.
    fn degree_bound(&self, i: usize) -> usize {
        let top = -self.exponents[i].enclosure(64).lo.clone();
        let least = -self.exponents[0].enclosure(64).hi.clone();
        let r = top / least;
        to_f64(&r).floor() as usize + 1
    }
}

fn degree_vectors(l: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn rec(l: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            if cur.iter().sum::<usize>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(l, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, max_total, &mut Vec::new(), &mut out);
    out
}

/// All admitted indices, sorted by target then degree vector.
pub fn subresonance_indices(
    spec: &ContractionSpectrum,
    convention: Convention,
    cfg: &Config,
) -> Result<Vec<SubresonanceIndex>> {
    let l = spec.len();
    let cap = cfg.precision_cap_bits;
    let mut out = Vec::new();
    for i in 0..l {
        for s in degree_vectors(l, spec.degree_bound(i)) {
            let total: usize = s.iter().sum();
            let admitted = if total == 1 && s[i] == 1 {
                true
            } else {
                match convention {
                    Convention::DiagonalLinear => total >= 2 && spec.slack_sign(i, &s, cap)? >= 0,
                    Convention::AllJ => spec.slack_sign(i, &s, cap)? >= 0,
                    Convention::ExcludeSelf => s[i] == 0 && spec.slack_sign(i, &s, cap)? >= 0,
                }
            };
            if admitted {
                out.push(SubresonanceIndex { target: i, degrees: s });
            }
        }
    }
    out.sort();
    Ok(out)
}

fn multichoose(n: usize, k: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    binomial((n + k - 1) as u128, k as u128)
}

/// `Σ m_i ∏_j multichoose(m_j, s_j)` over the admitted indices.
pub fn sr_group_dimension(spec: &ContractionSpectrum, convention: Convention, cfg: &Config) -> Result<u128> {
    let m = spec.multiplicities();
    Ok(subresonance_indices(spec, convention, cfg)?
        .iter()
        .map(|ix| {
            m[ix.target] as u128
                * ix.degrees
                    .iter()
                    .zip(m)
                    .map(|(&s, &mj)| multichoose(mj, s))
                    .product::<u128>()
        })
        .sum())
}

/// Brute-force count of (output coordinate, monomial) pairs admitted for an
/// exact spectrum, enumerating monomials in the individual coordinates.
pub fn brute_force_dimension(exponents: &[Q], multiplicities: &[usize], convention: Convention) -> u128 {
    // one variable per coordinate, carrying its block's exponent
    let vars: Vec<(usize, Q)> = multiplicities
        .iter()
        .enumerate()
        .flat_map(|(j, &m)| std::iter::repeat_n((j, exponents[j].clone()), m))
        .collect();
    let least = exponents.iter().map(|x| x.abs()).min().unwrap();
    let mut count = 0u128;
    for (i, &mi) in multiplicities.iter().enumerate() {
        let chi = &exponents[i];
        let max_deg = (chi.abs() / &least).floor().to_integer();
        let max_deg: usize = max_deg.try_into().unwrap();
        // monomials as non-decreasing variable index sequences
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, vec![])];
        let mut admitted = 0u128;
        while let Some((start, mono)) = stack.pop() {
            if !mono.is_empty() {
                let total: Q = mono.iter().map(|&v| vars[v].1.clone()).sum();
                let block_hits = |b: usize| mono.iter().filter(|&&v| vars[v].0 == b).count();
                let ok = if mono.len() == 1 && vars[mono[0]].0 == i {
                    true
                } else {
                    let holds = chi <= &total;
                    match convention {
                        Convention::DiagonalLinear => mono.len() >= 2 && holds,
                        Convention::AllJ => holds,
                        Convention::ExcludeSelf => block_hits(i) == 0 && holds,
                    }
                };
                if ok {
                    admitted += 1;
                }
            }
            if mono.len() < max_deg {
                for v in start..vars.len() {
                    let mut next = mono.clone();
                    next.push(v);
                    stack.push((v, next));
                }
            }
        }
        count += mi as u128 * admitted;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(chi: &[i64], m: &[usize], c: Convention) -> u128 {
        sr_group_dimension(&ContractionSpectrum::from_i64(chi, m).unwrap(), c, &Config::default()).unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(dim(&[-1], &[3], Convention::DiagonalLinear), 9);
        assert_eq!(dim(&[-1, -2], &[1, 1], Convention::DiagonalLinear), 3);
        assert_eq!(dim(&[-1, -2], &[2, 1], Convention::DiagonalLinear), 8);
        assert_eq!(dim(&[-1, -2], &[1, 1], Convention::AllJ), 4);
    }

    #[test]
    fn index_lists() {
        let spec = ContractionSpectrum::from_i64(&[-1, -2], &[1, 1]).unwrap();
        let ix = subresonance_indices(&spec, Convention::DiagonalLinear, &Config::default()).unwrap();
        let got: Vec<(usize, Vec<usize>)> = ix.into_iter().map(|x| (x.target, x.degrees)).collect();
        assert_eq!(got, vec![(0, vec![1, 0]), (1, vec![0, 1]), (1, vec![2, 0])]);
    }

    #[test]
    fn brute_force_matches() {
        for c in [Convention::DiagonalLinear, Convention::AllJ, Convention::ExcludeSelf] {
            for (chi, m) in [(vec![-1, -2], vec![2, 1]), (vec![-2, -3, -5], vec![1, 2, 1])] {
                let qs: Vec<Q> = chi.iter().map(|&x| q(x)).collect();
                assert_eq!(dim(&chi, &m, c), brute_force_dimension(&qs, &m, c));
            }
        }
    }

    #[test]
    fn rejects_bad_spectra() {
        assert!(ContractionSpectrum::from_i64(&[-2, -1], &[1, 1]).is_err());
        assert!(ContractionSpectrum::from_i64(&[1], &[1]).is_err());
        assert!(ContractionSpectrum::from_i64(&[-1], &[0]).is_err());
    }

    #[test]
    fn evaluated_spectrum() {
        let fs = vec![
            LyapunovFunctional::synthetic_i64(&[1, 0]),
            LyapunovFunctional::synthetic_i64(&[0, 1]),
            LyapunovFunctional::synthetic_i64(&[-1, -1]),
        ];
        let spec = ContractionSpectrum::at_element(&fs, &[-1, -2], &Config::default()).unwrap();
        assert_eq!(spec.len(), 2);
        assert!((spec.exponents()[0].approx() + 1.0).abs() < 1e-12);
        assert_eq!(dim_of(&spec), 3);
    }

    fn dim_of(spec: &ContractionSpectrum) -> u128 {
        sr_group_dimension(spec, Convention::DiagonalLinear, &Config::default()).unwrap()
    }
}
