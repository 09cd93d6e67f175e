//! Independent reference computations for the self-test and the test
//! suites: fixed-point complex root finding and Lyndon word counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::factor::squarefree_decomposition;
use crate::exactnum::poly::IntPolynomial;
use crate::exactnum::rational::Q;

/// Complex number `(re + i·im) / 2^prec`.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

struct FixedField {
    prec: u32,
}

impl FixedField {
    fn one(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    fn from_f64(&self, v: f64) -> BigInt {
        let scaled = v * 2f64.powi(52);
        let m = BigInt::from(scaled.round() as i64);
        if self.prec >= 52 {
            m << (self.prec - 52)
        } else {
            m >> (52 - self.prec)
        }
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.prec,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.prec,
        }
    }

    fn div(&self, a: &Fx, b: &Fx) -> Option<Fx> {
        let n = &b.re * &b.re + &b.im * &b.im;
        if n.is_zero() {
            return None;
        }
        let re = ((&a.re * &b.re + &a.im * &b.im) << self.prec).div_floor(&n);
        let im = ((&a.im * &b.re - &a.re * &b.im) << self.prec).div_floor(&n);
        Some(Fx { re, im })
    }

    fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    fn eval(&self, coeffs: &[BigInt], z: &Fx) -> Fx {
        let mut acc = Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        };
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, z);
            acc.re += c << self.prec;
        }
        acc
    }

    fn abs_sq(&self, a: &Fx) -> BigInt {
        (&a.re * &a.re + &a.im * &a.im) >> self.prec
    }
}

/// Approximate roots of a squarefree integer polynomial to about `digits`
/// decimal digits by Weierstrass iteration in fixed point.
fn roots_fixed(p: &IntPolynomial, digits: u32) -> Vec<Fx> {
    let n = p.degree();
    let prec = working_prec(digits);
    let f = FixedField { prec };
    let lc = p.leading();
    let coeffs: Vec<BigInt> = p.coeffs().to_vec();
    let bound = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|c| (c.to_f64().unwrap() / lc.to_f64().unwrap()).abs())
            .fold(0.0, f64::max);
    let mut z: Vec<Fx> = (0..n)
        .map(|j| {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.7;
            Fx {
                re: f.from_f64(bound * 0.9 * ang.cos()),
                im: f.from_f64(bound * 0.9 * ang.sin()),
            }
        })
        .collect();
    let tol = BigInt::one() << 24u32;
    let lc_fx = Fx {
        re: &lc << prec,
        im: BigInt::zero(),
    };
    for _ in 0..5000 {
        let mut moved = BigInt::zero();
        for j in 0..n {
            let num = f.eval(&coeffs, &z[j]);
            let mut den = lc_fx.clone();
            for k in 0..n {
                if k != j {
                    den = f.mul(&den, &f.sub(&z[j], &z[k]));
                }
            }
            if let Some(w) = f.div(&num, &den) {
                let size = w.re.abs().max(w.im.abs());
                if size > moved {
                    moved = size;
                }
                z[j] = f.sub(&z[j], &w);
            }
        }
        if moved < tol {
            break;
        }
    }
    z
}

fn working_prec(digits: u32) -> u32 {
    (digits as f64 * 3.33) as u32 + 64
}

/// Squared moduli of all roots (with multiplicity) of `p`, as rationals
/// accurate to about `digits` decimal digits. Zero roots are included.
pub fn root_moduli_sq(p: &IntPolynomial, digits: u32) -> Vec<Q> {
    let prec = working_prec(digits);
    let f = FixedField { prec };
    let mut out = Vec::new();
    let zeros = p.zero_root_multiplicity();
    out.extend(std::iter::repeat_n(Q::zero(), zeros));
    let stripped = p.strip_zero_roots();
    for (factor, mult) in squarefree_decomposition(&stripped) {
        if factor.degree() == 0 {
            continue;
        }
        for z in roots_fixed(&factor, digits) {
            let m = Q::new(f.abs_sq(&z), f.one());
            out.extend(std::iter::repeat_n(m, mult));
        }
    }
    out.sort();
    out
}

/// Some root has modulus within `10^{-digits/2}` of 1.
pub fn has_unit_root_numeric(p: &IntPolynomial, digits: u32) -> bool {
    let tol = Q::new(BigInt::one(), BigInt::from(10).pow(digits / 2));
    root_moduli_sq(p, digits)
        .iter()
        .any(|m| (m - Q::one()).abs() < tol)
}

/// Count Lyndon words of length `n` over `k` letters by enumeration.
pub fn lyndon_count(k: usize, n: usize) -> usize {
    let total = k.pow(n as u32);
    let mut count = 0;
    for code in 0..total {
        let mut w = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            w.push(c % k);
            c /= k;
        }
        let lyndon = (1..n).all(|r| {
            let rot: Vec<usize> = w[r..].iter().chain(&w[..r]).copied().collect();
            w < rot
        });
        if lyndon {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::to_f64;

    #[test]
    fn golden_moduli() {
        let m = root_moduli_sq(&IntPolynomial::from_i64(&[1, -3, 1]), 50);
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((to_f64(&m[1]) - phi2 * phi2).abs() < 1e-12);
        assert!(has_unit_root_numeric(&IntPolynomial::from_i64(&[1, 1, 1]), 50));
        assert!(!has_unit_root_numeric(&IntPolynomial::from_i64(&[1, -3, 1]), 50));
        // repeated and zero roots
        let p = IntPolynomial::from_i64(&[0, 0, 4, -4, 1]);
        let m = root_moduli_sq(&p, 30);
        assert_eq!(m.len(), 4);
        assert!((to_f64(&m[3]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lyndon() {
        assert_eq!(lyndon_count(2, 1), 2);
        assert_eq!(lyndon_count(2, 3), 2);
        assert_eq!(lyndon_count(3, 2), 3);
    }
}
