//! Lyapunov functionals and exact proportionality tests.

use num_traits::{Signed, Zero};

use crate::config::Config;
use crate::exactnum::modulus::{certify_multiplicative_relation_with, certify_ratio, ModulusClass};
use crate::exactnum::rational::{Interval, Q};

/// Value of a functional on one generator.
#[derive(Clone, Debug)]
pub enum LogValue {
    /// A rational value (synthetic arrangements).
    Exact(Q),
    /// `log|λ|` of an algebraic modulus.
    LogModulus(ModulusClass),
}

impl LogValue {
    pub fn enclosure(&self, bits: u32) -> Interval {
        match self {
            LogValue::Exact(v) => Interval::point(v.clone()),
            LogValue::LogModulus(c) => c.log_enclosure(bits),
        }
    }

    /// Exactly zero.
    pub fn is_zero(&self) -> bool {
        match self {
            LogValue::Exact(v) => v.is_zero(),
            LogValue::LogModulus(c) => c.is_unit(),
        }
    }

    pub fn sign(&self, cap_bits: u32) -> Option<i32> {
        match self {
            LogValue::Exact(v) => Some(if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }),
            LogValue::LogModulus(c) => c.log_sign(cap_bits),
        }
    }

    pub fn negate(&self) -> LogValue {
        match self {
            LogValue::Exact(v) => LogValue::Exact(-v.clone()),
            LogValue::LogModulus(c) => LogValue::LogModulus(c.inverse()),
        }
    }

    pub fn approx(&self) -> f64 {
        self.enclosure(53).to_f64_mid()
    }
}

/// Where a functional comes from in the joint primary decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctionalOrigin {
    /// Indices of joint primary components contributing to this functional.
    pub components: Vec<usize>,
    /// For each generator, the index of the modulus class of its
    /// characteristic polynomial.
    pub class_indices: Vec<usize>,
}

/// A linear functional on R^k given by its values on the generators.
#[derive(Clone, Debug)]
pub struct LyapunovFunctional {
    pub values: Vec<LogValue>,
    pub multiplicity: usize,
    pub origin: FunctionalOrigin,
}

/// Outcome of comparing the directions of two functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proportionality {
    /// `ψ = c χ` with `c > 0` (`ratio` when rational).
    Positive { ratio: Option<Q> },
    /// `ψ = c χ` with `c < 0`.
    Negative { ratio: Option<Q> },
    NotProportional,
    Undecided { precision_bits: u32 },
}

impl LyapunovFunctional {
    pub fn synthetic(values: &[Q]) -> Self {
        LyapunovFunctional {
            values: values.iter().cloned().map(LogValue::Exact).collect(),
            multiplicity: 1,
            origin: FunctionalOrigin::default(),
        }
    }

    pub fn synthetic_i64(values: &[i64]) -> Self {
        Self::synthetic(&values.iter().map(|&v| Q::from_integer(v.into())).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// Identically zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn negate(&self) -> LyapunovFunctional {
        LyapunovFunctional {
            values: self.values.iter().map(|v| v.negate()).collect(),
            multiplicity: self.multiplicity,
            origin: self.origin.clone(),
        }
    }

    pub fn approx(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.approx()).collect()
    }

    pub fn enclosures(&self, bits: u32) -> Vec<Interval> {
        self.values.iter().map(|v| v.enclosure(bits)).collect()
    }

    /// Enclosure of `χ(b)`.
    pub fn evaluate(&self, b: &[Q], bits: u32) -> Interval {
        assert_eq!(b.len(), self.rank());
        self.values
            .iter()
            .zip(b)
            .filter(|(_, x)| !x.is_zero())
            .fold(Interval::zero(), |acc, (v, x)| acc.add(&v.enclosure(bits).scale(x)))
    }

    pub fn evaluate_i64(&self, b: &[i64], bits: u32) -> Interval {
        let bq: Vec<Q> = b.iter().map(|&x| Q::from_integer(x.into())).collect();
        self.evaluate(&bq, bits)
    }

    pub fn approx_at(&self, b: &[f64]) -> f64 {
        self.approx().iter().zip(b).map(|(a, x)| a * x).sum()
    }

    /// Certified sign of `χ(b)`, `None` if undecided at the cap.
    pub fn sign_at(&self, b: &[Q], cap_bits: u32) -> Option<i32> {
        let mut bits = 32;
        loop {
            let iv = self.evaluate(b, bits);
            if let Some(s) = iv.sign() {
                if s != 0 || iv.is_point() {
                    return Some(s);
                }
            }
            if bits >= cap_bits {
                return None;
            }
            bits = (bits * 2).min(cap_bits);
        }
    }

    pub fn sign_at_i64(&self, b: &[i64], cap_bits: u32) -> Option<i32> {
        let bq: Vec<Q> = b.iter().map(|&x| Q::from_integer(x.into())).collect();
        self.sign_at(&bq, cap_bits)
    }

    fn nonzero_coords(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    /// Rational vector `d` with `χ = χ(e_j0) · d`, where `j0` is the first
    /// nonzero coordinate, if all coordinate ratios are certified rational.
    pub fn rational_direction(&self, cfg: &Config) -> Option<Vec<Q>> {
        let nz = self.nonzero_coords();
        let j0 = *nz.first()?;
        let mut d = vec![Q::zero(); self.rank()];
        d[j0] = Q::from_integer(1.into());
        for &j in &nz[1..] {
            d[j] = exact_ratio(&self.values[j0], &self.values[j], cfg)?;
        }
        Some(d)
    }
}

/// Certified rational `c` with `y = c x`, if one with numerator and
/// denominator at most `max_den` exists.
pub fn exact_ratio(x: &LogValue, y: &LogValue, cfg: &Config) -> Option<Q> {
    match (x, y) {
        (LogValue::Exact(a), LogValue::Exact(b)) => {
            if a.is_zero() {
                None
            } else {
                Some(b / a)
            }
        }
        (LogValue::LogModulus(a), LogValue::LogModulus(b)) => {
            let cap = cfg.precision_cap_bits;
            let sa = a.log_sign(cap)?;
            let sb = b.log_sign(cap)?;
            if sa == 0 || sb == 0 {
                return None;
            }
            let pa = a.with_positive_log(cap)?;
            let pb = b.with_positive_log(cap)?;
            let (p, q) = certify_multiplicative_relation_with(&pb, &pa, cfg.max_den, cap)?;
            let c = Q::new(p.into(), q.into());
            Some(if sa == sb { c } else { -c })
        }
        _ => None,
    }
}

/// Exact test of `y = c x`; `None` when it cannot be decided.
pub fn ratio_holds(x: &LogValue, y: &LogValue, c: &Q, cfg: &Config) -> Option<bool> {
    let cap = cfg.precision_cap_bits;
    match (x, y) {
        (LogValue::Exact(a), LogValue::Exact(b)) => Some(&(a * c) == b),
        (LogValue::LogModulus(a), LogValue::LogModulus(b)) => {
            if c.is_zero() {
                return Some(b.is_unit());
            }
            if a.is_unit() || b.is_unit() {
                return Some(a.is_unit() && b.is_unit());
            }
            let sa = a.log_sign(cap)?;
            let sb = b.log_sign(cap)?;
            let sc = if c.is_positive() { 1 } else { -1 };
            if sa * sc != sb {
                return Some(false);
            }
            let pa = a.with_positive_log(cap)?;
            let pb = b.with_positive_log(cap)?;
            let ac = c.abs();
            let p = ac.numer().try_into().ok()?;
            let q = ac.denom().try_into().ok()?;
            certify_ratio(&pb, &pa, p, q, cap)
        }
        _ => {
            let mut bits = 32;
            loop {
                let lhs = x.enclosure(bits).scale(c);
                let rhs = y.enclosure(bits);
                if lhs.separation(&rhs).is_some() {
                    return Some(false);
                }
                if bits >= cap {
                    return None;
                }
                bits = (bits * 2).min(cap);
            }
        }
    }
}

fn sign_of(v: i32, w: i32) -> bool {
    v * w > 0
}

/// Decide whether `psi` is a positive or negative multiple of `chi`.
pub fn proportionality(chi: &LyapunovFunctional, psi: &LyapunovFunctional, cfg: &Config) -> Proportionality {
    let cap = cfg.precision_cap_bits;
    let za = chi.nonzero_coords();
    let zb = psi.nonzero_coords();
    if za != zb {
        return Proportionality::NotProportional;
    }
    let Some(&j0) = za.first() else {
        return Proportionality::Positive { ratio: None };
    };
    let (Some(s0), Some(t0)) = (chi.values[j0].sign(cap), psi.values[j0].sign(cap)) else {
        return Proportionality::Undecided { precision_bits: cap };
    };
    let positive = sign_of(s0, t0);
    let verdict = |ratio: Option<Q>| {
        if positive {
            Proportionality::Positive { ratio }
        } else {
            Proportionality::Negative { ratio }
        }
    };
    if za.len() == 1 {
        let ratio = exact_ratio(&chi.values[j0], &psi.values[j0], cfg);
        return verdict(ratio);
    }
    // a common rational ratio across all coordinates
    if let Some(c) = exact_ratio(&chi.values[j0], &psi.values[j0], cfg) {
        let mut all = true;
        let mut undecided = false;
        for &j in &za[1..] {
            match ratio_holds(&chi.values[j], &psi.values[j], &c, cfg) {
                Some(true) => {}
                Some(false) => {
                    all = false;
                    break;
                }
                None => {
                    undecided = true;
                    all = false;
                }
            }
        }
        if all {
            return verdict(Some(c));
        }
        if !undecided {
            return Proportionality::NotProportional;
        }
    }
    // both directions rational
    if let (Some(da), Some(db)) = (chi.rational_direction(cfg), psi.rational_direction(cfg)) {
        return if da == db {
            verdict(None)
        } else {
            Proportionality::NotProportional
        };
    }
    // refutation by separated coordinate ratios
    let mut bits = 32;
    loop {
        let ea = chi.enclosures(bits);
        let eb = psi.enclosures(bits);
        let ratios: Vec<Option<Interval>> = za.iter().map(|&j| eb[j].div(&ea[j])).collect();
        for i in 0..ratios.len() {
            for j in i + 1..ratios.len() {
                if let (Some(x), Some(y)) = (&ratios[i], &ratios[j]) {
                    if x.separation(y).is_some() {
                        return Proportionality::NotProportional;
                    }
                }
            }
        }
        if bits >= cap {
            return Proportionality::Undecided { precision_bits: cap };
        }
        bits = (bits * 2).min(cap);
    }
}
