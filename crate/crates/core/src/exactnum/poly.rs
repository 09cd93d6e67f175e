//! Dense univariate polynomials with exact coefficients.
//!
//! [`IntPolynomial`] is the public integer representation; [`QPoly`] is the
//! rational working type used for Euclidean algorithms. Both store
//! coefficients lowest degree first with no trailing zeros.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{qi, Q};

/// Integer polynomial, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "super::serde_num::bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", a)?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - a`
    pub fn linear_root(a: i64) -> Self {
        Self::from_i64(&[-a, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(qi).collect())
    }

    pub fn mul(&self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, e: usize) -> IntPolynomial {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.to_q().eval(x)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPolynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `x^n p(1/x)`.
    pub fn reciprocal(&self) -> IntPolynomial {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Multiplicity of the root 0.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// The polynomial divided by `x^k` where `k` is the multiplicity of 0.
    pub fn strip_zero_roots(&self) -> IntPolynomial {
        let k = self.zero_root_multiplicity();
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Exact division; `None` if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        let (qt, r) = self.to_q().divrem(&d.to_q());
        if !r.is_zero() {
            return None;
        }
        qt.to_integer_exact()
    }
}

/// Rational polynomial, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    pub(crate) c: Vec<Q>,
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn zero() -> Self {
        QPoly { c: vec![] }
    }

    pub fn constant(v: Q) -> Self {
        Self::new(vec![v])
    }

    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn lc(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Q::zero(); n];
        for (i, v) in self.c.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in o.c.iter().enumerate() {
            c[i] += v;
        }
        Self::new(c)
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, k: &Q) -> QPoly {
        Self::new(self.c.iter().map(|v| v * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, e: usize) -> QPoly {
        let mut r = QPoly::constant(Q::one());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn derivative(&self) -> QPoly {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.lc();
        let dd = d.degree();
        let mut quo = vec![Q::zero(); self.c.len() - d.c.len() + 1];
        for k in (0..quo.len()).rev() {
            let coef = &r[k + dd] / &dl;
            if !coef.is_zero() {
                for (j, dv) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dv;
                }
            }
            quo[k] = coef;
        }
        r.truncate(dd);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        self.scale(&(Q::one() / l))
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.to_primitive_q();
        let mut b = o.to_primitive_q();
        while !b.is_zero() {
            let r = a.rem(&b).to_primitive_q();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> QPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Rescales by a positive rational so the coefficients are coprime
    /// integers. Signs are preserved.
    pub fn to_primitive_q(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let ip = self.to_integer_scaled();
        ip.to_q()
    }

    /// Positive rational multiple with coprime integer coefficients (sign of
    /// the leading coefficient preserved).
    pub fn to_integer_scaled(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut l = BigInt::one();
        for v in &self.c {
            l = l.lcm(v.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|v| (v * qi(&l)).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        IntPolynomial::new(ints.into_iter().map(|c| c / &g).collect())
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_int(&self) -> IntPolynomial {
        self.to_integer_scaled().primitive()
    }

    pub fn to_integer_exact(&self) -> Option<IntPolynomial> {
        if self.c.iter().all(|v| v.is_integer()) {
            Some(IntPolynomial::new(self.c.iter().map(|v| v.to_integer()).collect()))
        } else {
            None
        }
    }

    /// `p(a x + b)`.
    pub fn compose_affine(&self, a: &Q, b: &Q) -> QPoly {
        let lin = QPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = QPoly::zero();
        for v in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(v.clone()));
        }
        acc
    }

    /// `p(q(x))`.
    pub fn compose(&self, inner: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for v in self.c.iter().rev() {
            acc = acc.mul(inner).add(&QPoly::constant(v.clone()));
        }
        acc
    }

    /// Polynomial whose roots are the squares of the roots of `self`.
    pub fn graeffe(&self) -> QPoly {
        let neg: Vec<Q> = self
            .c
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == 1 { -v.clone() } else { v.clone() })
            .collect();
        let h = self.mul(&QPoly::new(neg));
        QPoly::new(h.c.iter().step_by(2).cloned().collect())
    }

    /// Power sums `s_1..s_count` of the roots (with multiplicity).
    pub fn power_sums(&self, count: usize) -> Vec<Q> {
        let m = self.monic();
        let n = m.degree();
        // x^n + a_{n-1} x^{n-1} + ... + a_0
        let a = |i: usize| -> Q { m.c[i].clone() };
        let mut s = vec![Q::zero(); count + 1];
        for k in 1..=count {
            let mut acc = Q::zero();
            for i in 1..k.min(n + 1) {
                acc += a(n - i) * &s[k - i];
            }
            if k <= n {
                acc += a(n - k) * Q::from_integer(BigInt::from(k));
            }
            s[k] = -acc;
        }
        s.remove(0);
        s
    }

    /// Monic polynomial of degree `n` with prescribed power sums
    /// `s_1..s_n` (Newton's identities).
    pub fn from_power_sums(s: &[Q]) -> QPoly {
        let n = s.len();
        let mut e = vec![Q::one()];
        for k in 1..=n {
            let mut acc = Q::zero();
            for i in 1..=k {
                let term = &e[k - i] * &s[i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            e.push(acc / Q::from_integer(BigInt::from(k)));
        }
        // prod (x - r) = sum_k (-1)^k e_k x^{n-k}
        let mut c = vec![Q::zero(); n + 1];
        for (k, ek) in e.iter().enumerate() {
            c[n - k] = if k % 2 == 1 { -ek.clone() } else { ek.clone() };
        }
        QPoly::new(c)
    }

    /// Polynomial whose roots are the `e`-th powers of the roots of `self`.
    pub fn root_powers(&self, e: usize) -> QPoly {
        let n = self.degree();
        if e == 1 {
            return self.monic();
        }
        let s = self.power_sums(n * e);
        let se: Vec<Q> = (1..=n).map(|k| s[k * e - 1].clone()).collect();
        QPoly::from_power_sums(&se)
    }

    /// Polynomial whose roots are all products `r_i r_j` with `i <= j`.
    pub fn symmetric_square(&self) -> QPoly {
        let n = self.degree();
        let m = n * (n + 1) / 2;
        let s = self.power_sums(2 * m);
        let two = Q::from_integer(BigInt::from(2));
        let sym: Vec<Q> = (1..=m)
            .map(|k| (&s[k - 1] * &s[k - 1] + &s[2 * k - 1]) / &two)
            .collect();
        QPoly::from_power_sums(&sym)
    }

    /// Polynomial in `y` whose roots are `r + 1/r` for a palindromic `self`
    /// of even degree.
    pub fn palindromic_to_trace(&self) -> QPoly {
        let n = self.degree();
        debug_assert!(n % 2 == 0);
        let h = n / 2;
        // p(x)/x^h = c_h + sum_{j>=1} c_{h+j} (x^j + x^-j)
        // x^j + x^-j = D_j(y), D_0 = 2, D_1 = y, D_j = y D_{j-1} - D_{j-2}
        let mut d_prev = QPoly::constant(Q::from_integer(BigInt::from(2)));
        let mut d_cur = QPoly::x();
        let mut acc = QPoly::constant(self.c[h].clone());
        for j in 1..=h {
            if j > 1 {
                let next = QPoly::x().mul(&d_cur).sub(&d_prev);
                d_prev = d_cur;
                d_cur = next;
            }
            acc = acc.add(&d_cur.scale(&self.c[h + j]));
        }
        acc
    }
}
