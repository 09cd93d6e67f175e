//! Rational helpers: dyadic rounding, certified square roots and logarithms,
//! and closed rational intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

pub fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(BigInt::one() << (e as usize))
    } else {
        Q::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn to_f64(x: &Q) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators/denominators: shift both down first.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (x.numer() >> (shift_n as usize)).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> (shift_d as usize)).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

/// Exact rational value of a finite f64.
pub fn from_f64(v: f64) -> Q {
    Q::from_float(v).unwrap_or_else(Q::zero)
}

/// Largest dyadic `k / 2^bits` not exceeding `x`.
pub fn floor_dyadic(x: &Q, bits: u32) -> Q {
    let scaled = x.numer() << (bits as usize);
    let n = scaled.div_floor(x.denom());
    Q::new(n, BigInt::one() << (bits as usize))
}

/// Smallest dyadic `k / 2^bits` not below `x`.
pub fn ceil_dyadic(x: &Q, bits: u32) -> Q {
    let scaled = x.numer() << (bits as usize);
    let n = -((-scaled).div_floor(x.denom()));
    Q::new(n, BigInt::one() << (bits as usize))
}

/// `floor(log2 |x|)` for nonzero `x`.
pub fn floor_log2(x: &Q) -> i64 {
    let nb = x.numer().abs().bits() as i64;
    let db = x.denom().bits() as i64;
    let mut e = nb - db;
    // 2^e might overshoot by one in either direction
    let ax = x.abs();
    while pow2(e) > ax {
        e -= 1;
    }
    while pow2(e + 1) <= ax {
        e += 1;
    }
    e
}

/// Rational bounds `lo <= sqrt(x) <= hi` with `hi - lo <= 2^-bits`.
pub fn sqrt_bounds(x: &Q, bits: u32) -> (Q, Q) {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let scaled = (x.numer() << (2 * bits as usize)).div_floor(x.denom());
    let r = scaled.sqrt();
    let den = BigInt::one() << (bits as usize);
    let lo = Q::new(r.clone(), den.clone());
    let hi = if &r * &r == scaled && (x.numer() << (2 * bits as usize)).is_multiple_of(x.denom())
    {
        lo.clone()
    } else {
        Q::new(r + 1, den)
    };
    (lo, hi)
}

fn atanh_fixed(u: &Q, prec: usize, upper: bool) -> BigInt {
    // u in [0, 1/3]; returns a fixed-point (scale 2^prec) bound on atanh(u).
    let scale = BigInt::one() << prec;
    let uf = if upper {
        -((-(u.numer() * &scale)).div_floor(u.denom()))
    } else {
        (u.numer() * &scale).div_floor(u.denom())
    };
    if uf.is_zero() {
        return if upper { BigInt::one() } else { BigInt::zero() };
    }
    let round = |v: BigInt| -> BigInt {
        if upper {
            -((-v) >> prec)
        } else {
            v >> prec
        }
    };
    let u2 = round(&uf * &uf);
    let mut term = uf.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        if upper {
            sum += -((-&term).div_floor(&d));
        } else {
            sum += term.div_floor(&d);
        }
        term = round(&term * &u2);
        k += 1;
        if term.is_zero() || (term.bits() as usize) < 2 {
            break;
        }
    }
    if upper {
        // geometric tail with ratio <= 1/9, plus accumulated rounding
        sum += 2 * term + BigInt::from(2 * k + 4);
    }
    sum
}

/// Rational bounds `lo <= ln(x) <= hi` for positive rational `x`, accurate to
/// about `2^-bits` (absolute).
pub fn ln_bounds(x: &Q, bits: u32) -> (Q, Q) {
    assert!(x.is_positive(), "ln of nonpositive rational");
    if x.is_one() {
        return (Q::zero(), Q::zero());
    }
    let e = floor_log2(x);
    let m = x / pow2(e);
    let u = (&m - Q::one()) / (&m + Q::one());
    let ebits = (64 - (e.unsigned_abs()).leading_zeros()) as usize;
    let prec = bits as usize + 16 + ebits;
    let lmlo = atanh_fixed(&u, prec, false) * 2;
    let lmhi = atanh_fixed(&u, prec, true) * 2;
    let third = qr(1, 3);
    let l2lo = atanh_fixed(&third, prec, false) * 2;
    let l2hi = atanh_fixed(&third, prec, true) * 2;
    let ebig = BigInt::from(e);
    let (elo, ehi) = if e >= 0 {
        (&ebig * &l2lo, &ebig * &l2hi)
    } else {
        (&ebig * &l2hi, &ebig * &l2lo)
    };
    let den = BigInt::one() << prec;
    let lo = Q::new(elo + lmlo, den.clone());
    let hi = Q::new(ehi + lmhi, den);
    (floor_dyadic(&lo, bits + 8), ceil_dyadic(&hi, bits + 8))
}

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Q::zero())
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / q(2)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `Some(Less)` if strictly left of `other`, `Some(Greater)` if strictly
    /// right, `None` if overlapping.
    pub fn separation(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Certified sign: `Some(±1)` if the interval excludes zero, `Some(0)` for
    /// the point zero, `None` otherwise.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn scale(&self, c: &Q) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// Quotient; `None` when the divisor straddles zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval::new(Q::one() / &o.hi, Q::one() / &o.lo);
        Some(self.mul(&inv))
    }

    /// Positive integer power of an interval with nonnegative endpoints.
    pub fn pow_nonneg(&self, e: u32) -> Interval {
        debug_assert!(!self.lo.is_negative());
        Interval::new(
            num_traits::pow(self.lo.clone(), e as usize),
            num_traits::pow(self.hi.clone(), e as usize),
        )
    }

    /// Outward rounding of both endpoints to dyadics with `bits` fractional bits.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    pub fn to_f64_mid(&self) -> f64 {
        to_f64(&self.mid())
    }
}

/// Bits needed to make a width comparison against `2^-bits`.
pub fn width_below(width: &Q, bits: u32) -> bool {
    width < &pow2(-(bits as i64))
}

/// Sign of an arbitrary-precision integer as -1/0/1.
pub fn bigint_sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Parse `"p/q"`, `"p"`, or a decimal like `"-1.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", if ip_digits.is_empty() { "0" } else { ip_digits }, fp);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_bounds_bracket_f64_values() {
        for &(n, d) in &[(2i64, 1i64), (3, 1), (1, 3), (10, 7), (7, 10), (1000, 1), (1, 12345), (5, 4)] {
            let x = qr(n, d);
            let (lo, hi) = ln_bounds(&x, 60);
            let v = (n as f64 / d as f64).ln();
            assert!(to_f64(&lo) <= v + 1e-15 && v - 1e-15 <= to_f64(&hi), "{n}/{d}");
            assert!(to_f64(&(&hi - &lo)) < 1e-15);
            assert!(lo <= hi);
        }
    }

    #[test]
    fn ln_bounds_high_precision_is_consistent() {
        let x = qr(3, 2);
        let (lo1, hi1) = ln_bounds(&x, 64);
        let (lo2, hi2) = ln_bounds(&x, 512);
        assert!(lo1 <= lo2 && hi2 <= hi1.clone() + pow2(-60));
        assert!(width_below(&(&hi2 - &lo2), 500));
        // ln(3/2) + ln(2/3) = 0
        let (lo3, hi3) = ln_bounds(&qr(2, 3), 512);
        assert!(&lo2 + &lo3 <= Q::zero() && Q::zero() <= &hi2 + &hi3);
    }

    #[test]
    fn sqrt_bounds_are_tight() {
        let (lo, hi) = sqrt_bounds(&q(2), 40);
        assert!(&lo * &lo <= q(2) && q(2) <= &hi * &hi);
        let (lo, hi) = sqrt_bounds(&qr(9, 4), 10);
        assert_eq!(lo, qr(3, 2));
        assert_eq!(hi, qr(3, 2));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6"), Some(qr(-1, 2)));
        assert_eq!(parse_rational("-1.5"), Some(qr(-3, 2)));
        assert_eq!(parse_rational("0.25"), Some(qr(1, 4)));
        assert_eq!(parse_rational("7"), Some(q(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&qr(6, 4)), "3/2");
    }

    #[test]
    fn interval_sign_and_ops() {
        let a = Interval::new(q(1), q(2));
        let b = Interval::new(q(-3), q(-1));
        assert_eq!(a.sign(), Some(1));
        assert_eq!(b.sign(), Some(-1));
        assert_eq!(a.add(&b).sign(), None);
        assert_eq!(a.mul(&b), Interval::new(q(-6), q(-1)));
        assert!(a.div(&Interval::new(q(-1), q(1))).is_none());
        assert_eq!(floor_log2(&qr(1, 3)), -2);
        assert_eq!(floor_log2(&q(8)), 3);
    }
}
