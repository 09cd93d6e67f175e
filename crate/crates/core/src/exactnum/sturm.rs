//! Sturm chains, Cauchy indices and exact root counting.

use num_traits::{One, Signed, Zero};

use super::poly::{IntPolynomial, QPoly};
use super::rational::{q, Interval, Q};
use crate::error::Error;

fn sign_of(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Signed remainder sequence `s0, s1, -rem(s0, s1), ...`, each term rescaled
/// by a positive constant.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<QPoly>,
}

impl SturmChain {
    /// Classical Sturm chain of `p` (with `p'` as second term).
    pub fn new(p: &QPoly) -> Self {
        Self::with_second(p, &p.derivative())
    }

    /// Chain for the Cauchy index of `second / first`.
    pub fn with_second(first: &QPoly, second: &QPoly) -> Self {
        let mut seq = vec![first.to_primitive_q()];
        let mut b = if first.is_zero() {
            second.to_primitive_q()
        } else {
            second.rem(first).to_primitive_q()
        };
        while !b.is_zero() {
            seq.push(b.clone());
            let a = &seq[seq.len() - 2];
            b = a.rem(&b).scale(&-Q::one()).to_primitive_q();
        }
        SturmChain { seq }
    }

    pub fn variations_at(&self, x: &Q) -> usize {
        variations(self.seq.iter().map(|p| sign_of(&p.eval(x))))
    }

    pub fn variations_pos_inf(&self) -> usize {
        variations(self.seq.iter().map(|p| sign_of(&p.lc())))
    }

    pub fn variations_neg_inf(&self) -> usize {
        variations(self.seq.iter().map(|p| {
            let s = sign_of(&p.lc());
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct roots of the first term in `(a, b]`.
    pub fn count_half_open(&self, a: &Q, b: &Q) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Cauchy index over the whole real line.
    pub fn cauchy_index(&self) -> i64 {
        self.variations_neg_inf() as i64 - self.variations_pos_inf() as i64
    }
}

/// Exact count of distinct real roots of `p` in the open interval
/// `(lo, hi)`. Endpoints must not be roots.
pub fn sturm_real_root_count(p: &IntPolynomial, lo: &Q, hi: &Q) -> Result<usize, Error> {
    if lo >= hi {
        return Err(Error::InvalidInput(format!(
            "empty interval ({}, {})",
            lo, hi
        )));
    }
    let pq = p.to_q();
    if pq.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if pq.eval(lo).is_zero() {
        return Err(Error::EndpointRoot(lo.clone()));
    }
    if pq.eval(hi).is_zero() {
        return Err(Error::EndpointRoot(hi.clone()));
    }
    Ok(SturmChain::new(&pq).count_half_open(lo, hi))
}

/// Cauchy upper bound on the moduli of the roots.
pub fn root_bound(p: &QPoly) -> Q {
    let lc = p.lc().abs();
    let m = p.c[..p.degree()]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Q::zero);
    m + Q::one()
}

/// Disjoint isolating intervals for the distinct real roots of `p` inside
/// `(lo, hi)`; the endpoints `lo`, `hi` must not be roots. Returned
/// intervals are open-isolating (endpoints are never roots) except for point
/// intervals `[r, r]` marking exact rational roots hit while splitting.
pub fn isolate_real_roots(p: &QPoly, lo: &Q, hi: &Q) -> Vec<Interval> {
    let sf = p.squarefree();
    if sf.degree() == 0 {
        return vec![];
    }
    debug_assert!(!sf.eval(lo).is_zero() && !sf.eval(hi).is_zero());
    let chain = SturmChain::new(&sf);
    let mut out = Vec::new();
    let mut work = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = work.pop() {
        let n = chain.count_half_open(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(Interval::new(a, b));
            continue;
        }
        let w = &b - &a;
        let mid = &a + &w / q(2);
        if sf.eval(&mid).is_zero() {
            // exact rational root: record it and carve it out
            out.push(Interval::point(mid.clone()));
            let mut eps = &w / q(4);
            loop {
                let l = &mid - &eps;
                let r = &mid + &eps;
                if !sf.eval(&l).is_zero()
                    && !sf.eval(&r).is_zero()
                    && chain.count_half_open(&l, &r) == 1
                {
                    work.push((a, l));
                    work.push((r, b));
                    break;
                }
                eps /= q(2);
            }
            continue;
        }
        work.push((a, mid.clone()));
        work.push((mid, b));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Number of roots (with multiplicity) of `p` strictly inside `|x| < t`.
/// Requires that no root lies on the circle `|x| = t`.
pub fn count_roots_in_disk(p: &QPoly, t: &Q) -> usize {
    let n = p.degree();
    if n == 0 {
        return 0;
    }
    // q(w) = p(t w)
    let qw = p.compose_affine(t, &Q::zero());
    // h(z) = sum_j q_j (1+z)^j (1-z)^(n-j)
    let opz = QPoly::from_i64(&[1, 1]);
    let omz = QPoly::from_i64(&[1, -1]);
    let mut pw_p = vec![QPoly::constant(Q::one())];
    let mut pw_m = vec![QPoly::constant(Q::one())];
    for i in 1..=n {
        pw_p.push(pw_p[i - 1].mul(&opz));
        pw_m.push(pw_m[i - 1].mul(&omz));
    }
    let mut h = QPoly::zero();
    for (j, c) in qw.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        h = h.add(&pw_p[j].mul(&pw_m[n - j]).scale(c));
    }
    debug_assert_eq!(h.degree(), n, "root on the circle |x| = t");
    // h(iy) = U(y) + i V(y)
    let mut u = vec![Q::zero(); n + 1];
    let mut v = vec![Q::zero(); n + 1];
    for (j, c) in h.c.iter().enumerate() {
        match j % 4 {
            0 => u[j] = c.clone(),
            1 => v[j] = c.clone(),
            2 => u[j] = -c.clone(),
            _ => v[j] = -c.clone(),
        }
    }
    let u = QPoly::new(u);
    let v = QPoly::new(v);
    let diff = if n % 2 == 0 {
        -SturmChain::with_second(&u, &v).cauchy_index()
    } else {
        SturmChain::with_second(&v, &u).cauchy_index()
    };
    let nl = (n as i64 + diff) / 2;
    nl as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::qr;

    #[test]
    fn sturm_counts_from_examples() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_real_root_count(&p, &q(0), &q(2)).unwrap(), 1);
        let p = IntPolynomial::from_i64(&[1, -3, 0, 1]);
        assert_eq!(sturm_real_root_count(&p, &q(-2), &q(2)).unwrap(), 3);
        let p = IntPolynomial::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_real_root_count(&p, &q(-10), &q(10)).unwrap(), 0);
    }

    #[test]
    fn endpoint_roots_are_rejected() {
        let p = IntPolynomial::from_i64(&[-1, 1]);
        assert!(matches!(
            sturm_real_root_count(&p, &q(1), &q(2)),
            Err(Error::EndpointRoot(_))
        ));
        assert!(sturm_real_root_count(&p, &q(2), &q(1)).is_err());
    }

    #[test]
    fn isolation_separates_close_roots() {
        // (x - 1/3)(x - 1/2)(x - 7)(x^2 - 2)
        let p = QPoly::from_i64(&[-1, 3])
            .mul(&QPoly::from_i64(&[-1, 2]))
            .mul(&QPoly::from_i64(&[-7, 1]))
            .mul(&QPoly::from_i64(&[-2, 0, 1]));
        let iv = isolate_real_roots(&p, &q(0), &q(10));
        assert_eq!(iv.len(), 4);
        for w in iv.windows(2) {
            assert!(w[0].hi <= w[1].lo);
        }
        let roots = [qr(1, 3), qr(1, 2), q(7)];
        for r in &roots {
            assert!(iv.iter().any(|i| i.contains(r)));
        }
    }

    #[test]
    fn disk_counts() {
        // roots 2, -1/2, and +-3i
        let p = QPoly::from_i64(&[-2, 1])
            .mul(&QPoly::from_i64(&[1, 2]))
            .mul(&QPoly::from_i64(&[9, 0, 1]));
        assert_eq!(count_roots_in_disk(&p, &qr(1, 4)), 0);
        assert_eq!(count_roots_in_disk(&p, &q(1)), 1);
        assert_eq!(count_roots_in_disk(&p, &qr(5, 2)), 2);
        assert_eq!(count_roots_in_disk(&p, &q(4)), 4);
        // repeated roots count with multiplicity
        let r = QPoly::from_i64(&[1, 0, 1]).mul(&QPoly::from_i64(&[1, 0, 1]));
        assert_eq!(count_roots_in_disk(&r, &q(2)), 4);
        assert_eq!(count_roots_in_disk(&r, &qr(1, 2)), 0);
        // odd degree
        let s = QPoly::from_i64(&[1, -3, 0, 1]);
        assert_eq!(count_roots_in_disk(&s, &qr(1, 2)), 1);
        assert_eq!(count_roots_in_disk(&s, &q(1)), 1);
        assert_eq!(count_roots_in_disk(&s, &qr(8, 5)), 2);
        assert_eq!(count_roots_in_disk(&s, &q(2)), 3);
    }
}
