//! Factorization of integer polynomials over Q (Zassenhaus: modular
//! factorization, Hensel lifting, factor recombination).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{IntPolynomial, QPoly};

type Fp = Vec<u64>;

struct Field {
    p: u64,
}

impl Field {
    fn trim(mut a: Fp) -> Fp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn deg(a: &Fp) -> isize {
        a.len() as isize - 1
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow_u(a, self.p - 2)
    }

    fn pow_u(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }

    fn reduce(&self, f: &IntPolynomial) -> Fp {
        let pb = BigInt::from(self.p);
        Self::trim(
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        let n = a.len().max(b.len());
        let mut r = vec![0; n];
        for (i, v) in r.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *v = (x + self.p - y) % self.p;
        }
        Self::trim(r)
    }

    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % self.p;
            }
        }
        Self::trim(r)
    }

    fn divrem(&self, a: &Fp, b: &Fp) -> (Fp, Fp) {
        let db = Self::deg(b);
        assert!(db >= 0, "division by zero polynomial");
        let mut r = a.clone();
        if Self::deg(a) < db {
            return (vec![], r);
        }
        let inv = self.inv(*b.last().unwrap());
        let mut qv = vec![0u64; (Self::deg(a) - db + 1) as usize];
        while Self::deg(&r) >= db {
            let k = (Self::deg(&r) - db) as usize;
            let c = r.last().unwrap() * inv % self.p;
            qv[k] = c;
            for (j, y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - c * y % self.p) % self.p;
            }
            r = Self::trim(r);
        }
        (Self::trim(qv), r)
    }

    fn rem(&self, a: &Fp, b: &Fp) -> Fp {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &Fp) -> Fp {
        match a.last() {
            None => vec![],
            Some(&l) => {
                let inv = self.inv(l);
                a.iter().map(|x| x * inv % self.p).collect()
            }
        }
    }

    fn gcd(&self, a: &Fp, b: &Fp) -> Fp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn derivative(&self, a: &Fp) -> Fp {
        Self::trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| (i as u64 % self.p) * c % self.p)
                .collect(),
        )
    }

    fn powmod(&self, base: &Fp, e: &BigUint, m: &Fp) -> Fp {
        let mut r: Fp = vec![1];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            r = self.rem(&self.mul(&r, &r), m);
            if e.bit(i) {
                r = self.rem(&self.mul(&r, &b), m);
            }
        }
        r
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf(&self, f: &Fp) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x: Fp = vec![0, 1];
        let mut h = x.clone();
        let mut d = 0;
        let pe = BigUint::from(self.p);
        while Self::deg(&f) >= 2 * (d as isize + 1) {
            d += 1;
            h = self.powmod(&h, &pe, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if Self::deg(&g) > 0 {
                out.push((g.clone(), d));
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
            }
        }
        if Self::deg(&f) > 0 {
            let df = Self::deg(&f) as usize;
            out.push((f, df));
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus, odd p).
    fn edf(&self, f: &Fp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
        let n = Self::deg(f) as usize;
        if n == d {
            out.push(self.monic(f));
            return;
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Fp = Self::trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if Self::deg(&a) < 1 {
                continue;
            }
            let g = self.gcd(&a, f);
            let g = if Self::deg(&g) > 0 {
                g
            } else {
                let b = self.sub(&self.powmod(&a, &e, f), &vec![1]);
                self.gcd(&b, f)
            };
            let dg = Self::deg(&g);
            if dg > 0 && (dg as usize) < n {
                let other = self.divrem(f, &g).0;
                self.edf(&g, d, rng, out);
                self.edf(&other, d, rng, out);
                return;
            }
        }
    }
}

fn small_primes(count: usize) -> Vec<u64> {
    let mut v = Vec::new();
    let mut n = 101u64;
    while v.len() < count {
        if (2..).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            v.push(n);
        }
        n += 2;
    }
    v
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn to_zpoly(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r.iter().map(|c| c.mod_floor(m)).collect()
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            (x - y).mod_floor(m)
        })
        .collect()
}

/// Lift `f ≡ g h (mod p)` with monic `g` to modulus `p^a`; `f` given modulo
/// `p^a`.
fn hensel_pair(fld: &Field, f: &[BigInt], g: &Fp, h: &Fp, a: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(fld.p);
    // s g + t h = 1 mod p
    let (s, t) = {
        let (mut r0, mut r1) = (g.clone(), h.clone());
        let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
        let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (qq, r) = fld.divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let ns = fld.sub(&s0, &fld.mul(&qq, &s1));
            s0 = std::mem::replace(&mut s1, ns);
            let nt = fld.sub(&t0, &fld.mul(&qq, &t1));
            t0 = std::mem::replace(&mut t1, nt);
        }
        assert_eq!(r0.len(), 1, "factors not coprime mod p");
        let inv = fld.inv(r0[0]);
        let sc = |v: &Fp| -> Fp { v.iter().map(|x| x * inv % fld.p).collect() };
        (sc(&s0), sc(&t0))
    };
    let mut gz = to_zpoly(g);
    let mut hz = to_zpoly(h);
    let mut pk = p.clone();
    let big_m = p.pow(a);
    for _ in 1..a {
        let next = &pk * &p;
        let diff = zsub(f, &zmul(&gz, &hz, &next), &next);
        let e: Fp = Field::trim(
            diff.iter()
                .map(|c| (c / &pk).mod_floor(&p).to_u64().unwrap())
                .collect(),
        );
        if !e.is_empty() {
            let (qq, r) = fld.divrem(&fld.mul(&e, &t), g);
            let dh = {
                // e = g (e s + q h) + h r, so dh = e s + q h
                let tmp = fld.mul(&e, &s);
                let add = fld.mul(&qq, h);
                let n = tmp.len().max(add.len());
                Field::trim(
                    (0..n)
                        .map(|i| (tmp.get(i).copied().unwrap_or(0) + add.get(i).copied().unwrap_or(0)) % fld.p)
                        .collect(),
                )
            };
            let upd = |z: &mut Vec<BigInt>, d: &Fp| {
                if z.len() < d.len() {
                    z.resize(d.len(), BigInt::zero());
                }
                for (i, c) in d.iter().enumerate() {
                    z[i] = (&z[i] + &pk * BigInt::from(*c)).mod_floor(&next);
                }
            };
            upd(&mut gz, &r);
            upd(&mut hz, &dh);
        }
        pk = next;
    }
    let norm = |v: Vec<BigInt>| -> Vec<BigInt> { v.into_iter().map(|c| c.mod_floor(&big_m)).collect() };
    (norm(gz), norm(hz))
}

/// Irreducible factors of a monic squarefree integer polynomial.
fn factor_monic_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = f.degree();
    if n <= 1 {
        return vec![f.clone()];
    }
    // prime with f mod p squarefree and fewest modular factors
    let mut best: Option<(u64, Vec<(Fp, usize)>, usize)> = None;
    let mut tried = 0;
    for p in small_primes(400) {
        let fld = Field { p };
        let fp = fld.reduce(f);
        if Field::deg(&fp) as usize != n {
            continue;
        }
        let g = fld.gcd(&fp, &fld.derivative(&fp));
        if Field::deg(&g) != 0 {
            continue;
        }
        let dd = fld.ddf(&fp);
        let count: usize = dd.iter().map(|(g, d)| Field::deg(g) as usize / d).sum();
        if count == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|b| count < b.2) {
            best = Some((p, dd, count));
        }
        tried += 1;
        if tried >= 8 {
            break;
        }
    }
    let (p, dd, _) = best.expect("no suitable prime");
    let fld = Field { p };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut modf: Vec<Fp> = Vec::new();
    for (g, d) in dd {
        fld.edf(&g, d, &mut rng, &mut modf);
    }
    modf.sort();
    // coefficient bound for factors of f
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1) * (BigInt::one() << n) * 2;
    let pb = BigInt::from(p);
    let mut a = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        a += 1;
    }
    // lift all modular factors sequentially
    let mut lifted: Vec<Vec<BigInt>> = Vec::new();
    let mut rest_target: Vec<BigInt> = f.coeffs().iter().map(|c| c.mod_floor(&m)).collect();
    for i in 0..modf.len() - 1 {
        let g = &modf[i];
        let h = modf[i + 1..].iter().fold(vec![1u64], |acc, x| fld.mul(&acc, x));
        let (gl, hl) = hensel_pair(&fld, &rest_target, g, &h, a);
        lifted.push(gl);
        rest_target = hl;
    }
    lifted.push(rest_target);
    // recombination
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut f_cur = f.clone();
    let mut factors = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for subset in combinations(remaining.len(), size) {
            let idx: Vec<usize> = subset.iter().map(|&s| remaining[s]).collect();
            let mut prod = vec![BigInt::one()];
            for &i in &idx {
                prod = zmul(&prod, &lifted[i], &m);
            }
            let cand = IntPolynomial::new(prod.iter().map(|c| symmetric_mod(c, &m)).collect());
            if let Some(qq) = f_cur.div_exact(&cand) {
                factors.push(cand);
                f_cur = qq;
                remaining.retain(|r| !idx.contains(r));
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    factors.push(f_cur);
    factors
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Squarefree decomposition `f = c ∏ s_i^i` (Yun), primitive parts.
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let fq = f.to_q();
    if fq.degree() == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut b = fq.gcd(&fq.derivative());
    let mut c = fq.divrem(&b).0;
    let mut d = fq.derivative().divrem(&b).0.sub(&c.derivative());
    let mut i = 1;
    while c.degree() > 0 {
        let a = c.gcd(&d);
        if a.degree() > 0 {
            out.push((a.to_primitive_int(), i));
        }
        c = c.divrem(&a).0;
        d = d.divrem(&a).0.sub(&c.derivative());
        i += 1;
        b = b.divrem(&a).0;
    }
    let _ = b;
    out
}

/// Irreducible factors over Q of `f` with multiplicities; each factor is a
/// primitive integer polynomial with positive leading coefficient. Sorted
/// by (degree, coefficients).
pub fn factor_over_q(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let mut out = Vec::new();
    for (s, mult) in squarefree_decomposition(f) {
        for g in factor_squarefree(&s) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

/// Irreducible factors of a squarefree primitive integer polynomial.
pub fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = f.degree();
    if n == 0 {
        return vec![];
    }
    let lc = f.leading();
    let mut out = Vec::new();
    if lc.is_one() {
        out = factor_monic_squarefree(f);
    } else {
        // F(y) = lc^{n-1} f(y / lc) is monic
        let mut cs = Vec::with_capacity(n + 1);
        let mut pw = BigInt::one();
        for i in (0..=n).rev() {
            cs.push(&f.coeffs()[i] * &pw);
            if i > 0 {
                pw *= &lc;
            }
        }
        cs.reverse();
        let cs: Vec<BigInt> = cs.into_iter().map(|c| c / &lc).collect();
        let big_f = IntPolynomial::new(cs);
        for g in factor_monic_squarefree(&big_f) {
            // back-substitute y = lc x
            let back = QPoly::new(g.coeffs().iter().map(|c| super::rational::qi(c)).collect())
                .compose_affine(&super::rational::qi(&lc), &num_traits::Zero::zero());
            out.push(back.to_primitive_int());
        }
    }
    out.into_iter()
        .map(|g| {
            let g = g.primitive();
            if g.leading().is_negative() {
                IntPolynomial::new(g.coeffs().iter().map(|c| -c).collect())
            } else {
                g
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn product(fs: &[(IntPolynomial, usize)]) -> IntPolynomial {
        fs.iter().fold(IntPolynomial::one(), |acc, (g, m)| acc.mul(&g.pow(*m)))
    }

    #[test]
    fn irreducible_stays_whole() {
        assert_eq!(factor_over_q(&p(&[1, -3, 1])), vec![(p(&[1, -3, 1]), 1)]);
        assert_eq!(factor_over_q(&p(&[1, -3, 0, 1])).len(), 1);
        // x^4 + 1 is irreducible over Q but splits mod every prime
        assert_eq!(factor_over_q(&p(&[1, 0, 0, 0, 1])).len(), 1);
    }

    #[test]
    fn products_split() {
        let f = p(&[1, -3, 1]).pow(2).mul(&p(&[-1, 1])).mul(&p(&[1, 1, 1]));
        let fs = factor_over_q(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
        assert!(fs.contains(&(p(&[1, -3, 1]), 2)));
    }

    #[test]
    fn cyclotomic_x12_minus_1() {
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fs = factor_over_q(&p(&c));
        assert_eq!(fs.len(), 6);
        assert_eq!(product(&fs), p(&c));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2-2)(x^2-3)(x^2-5)(x^2-7)
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1])).mul(&p(&[-5, 0, 1])).mul(&p(&[-7, 0, 1]));
        let fs = factor_over_q(&f);
        assert_eq!(fs.len(), 4);
        // x^4 - 10x^2 + 1 irreducible
        assert_eq!(factor_over_q(&p(&[1, 0, -10, 0, 1])).len(), 1);
    }

    #[test]
    fn non_monic() {
        let f = p(&[1, 2]).mul(&p(&[-1, 3])).mul(&p(&[1, 0, 5]));
        let fs = factor_over_q(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }
}
