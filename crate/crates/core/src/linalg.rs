//! Dense exact matrices over Z and Q.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::poly::{IntPolynomial, QPoly};
use crate::exactnum::rational::{qi, Q};

/// Square or rectangular integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix {
    #[serde(with = "crate::exactnum::serde_num::bigint_mat")]
    rows: Vec<Vec<BigInt>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", s.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        IntMatrix { rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix {
            rows: rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        }
    }

    pub fn from_vecs(rows: Vec<Vec<i64>>) -> Self {
        IntMatrix {
            rows: rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = BigInt::one();
        }
        IntMatrix { rows }
    }

    pub fn zeros(r: usize, c: usize) -> Self {
        IntMatrix {
            rows: vec![vec![BigInt::zero(); c]; r],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn is_square(&self) -> bool {
        self.rows.iter().all(|r| r.len() == self.nrows())
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let (n, m, p) = (self.nrows(), self.ncols(), o.ncols());
        let mut rows = vec![vec![BigInt::zero(); p]; n];
        for i in 0..n {
            for k in 0..m {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..p {
                    rows[i][j] += a * &o.rows[k][j];
                }
            }
        }
        IntMatrix { rows }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut r = IntMatrix::identity(self.nrows());
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// Integer power, negative exponents allowed for unimodular matrices.
    pub fn pow_signed(&self, e: i64) -> IntMatrix {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inverse_unimodular()
                .expect("negative power of a non-unimodular matrix")
                .pow(e.unsigned_abs())
        }
    }

    pub fn to_q(&self) -> QMat {
        QMat::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(qi).collect())
                .collect(),
        )
    }

    pub fn det(&self) -> BigInt {
        self.to_q().det().to_integer()
    }

    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let inv = self.to_q().inverse()?;
        inv.to_int()
    }

    pub fn transpose(&self) -> IntMatrix {
        let (n, m) = (self.nrows(), self.ncols());
        IntMatrix {
            rows: (0..m).map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[IntMatrix]) -> IntMatrix {
        let n: usize = blocks.iter().map(|b| b.nrows()).sum();
        let mut out = IntMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    out.rows[off + i][off + j] = b.rows[i][j].clone();
                }
            }
            off += b.nrows();
        }
        out
    }

    pub fn charpoly(&self) -> IntPolynomial {
        self.to_q()
            .charpoly()
            .to_integer_exact()
            .expect("integer matrix has integer characteristic polynomial")
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    r: usize,
    c: usize,
    d: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.r {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = (0..self.c).map(|j| self.at(i, j).to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(r: usize, c: usize) -> Self {
        QMat {
            r,
            c,
            d: vec![Q::zero(); r * c],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let d: Vec<Q> = rows.into_iter().flatten().collect();
        assert_eq!(d.len(), r * c, "ragged matrix");
        QMat { r, c, d }
    }

    /// Matrix whose columns are the given vectors (of length `n`).
    pub fn from_columns(n: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, v[i].clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64(rows).to_q()
    }

    pub fn nrows(&self) -> usize {
        self.r
    }

    pub fn ncols(&self) -> usize {
        self.c
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.d[i * self.c + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.d[i * self.c + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.d[i * self.c..(i + 1) * self.c].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.r).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.c).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.r).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.r == self.c
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        let mut rows = Vec::with_capacity(self.r);
        for i in 0..self.r {
            let mut row = Vec::with_capacity(self.c);
            for j in 0..self.c {
                let v = self.at(i, j);
                if !v.is_integer() {
                    return None;
                }
                row.push(v.to_integer());
            }
            rows.push(row);
        }
        Some(IntMatrix::new(rows))
    }

    pub fn transpose(&self) -> QMat {
        let mut m = Self::zeros(self.c, self.r);
        for i in 0..self.r {
            for j in 0..self.c {
                m.set(j, i, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        assert_eq!(self.c, o.r, "dimension mismatch in product");
        let mut m = Self::zeros(self.r, o.c);
        for i in 0..self.r {
            for k in 0..self.c {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.c {
                    let v = m.at(i, j) + a * o.at(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        (0..self.r)
            .map(|i| (0..self.c).fold(Q::zero(), |acc, j| acc + self.at(i, j) * &v[j]))
            .collect()
    }

    pub fn add(&self, o: &QMat) -> QMat {
        QMat {
            r: self.r,
            c: self.c,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &QMat) -> QMat {
        QMat {
            r: self.r,
            c: self.c,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> QMat {
        QMat {
            r: self.r,
            c: self.c,
            d: self.d.iter().map(|a| a * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> QMat {
        let mut base = self.clone();
        let mut r = QMat::identity(self.r);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &QPoly) -> QMat {
        let n = self.r;
        let mut acc = QMat::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = acc.at(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.c {
            if row == m.r {
                break;
            }
            let Some(p) = (row..m.r).find(|&i| !m.at(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.c {
                    m.d.swap(p * m.c + j, row * m.c + j);
                }
            }
            let inv = Q::one() / m.at(row, col);
            for j in col..m.c {
                let v = m.at(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.r {
                if i == row || m.at(i, col).is_zero() {
                    continue;
                }
                let f = m.at(i, col).clone();
                for j in col..m.c {
                    let v = m.at(i, j) - &f * m.at(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, as columns of the returned matrix.
    pub fn kernel(&self) -> QMat {
        let (m, piv) = self.rref();
        let free: Vec<usize> = (0..self.c).filter(|j| !piv.contains(j)).collect();
        let mut out = QMat::zeros(self.c, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, Q::one());
            for (i, &p) in piv.iter().enumerate() {
                out.set(p, k, -m.at(i, f).clone());
            }
        }
        out
    }

    /// Some solution of `self · X = rhs`, or `None` if inconsistent.
    pub fn solve(&self, rhs: &QMat) -> Option<QMat> {
        let aug = self.hcat(rhs);
        let (m, piv) = aug.rref();
        if piv.iter().any(|&p| p >= self.c) {
            return None;
        }
        let mut x = QMat::zeros(self.c, rhs.c);
        for (i, &p) in piv.iter().enumerate() {
            for j in 0..rhs.c {
                x.set(p, j, m.at(i, self.c + j).clone());
            }
        }
        Some(x)
    }

    pub fn hcat(&self, o: &QMat) -> QMat {
        assert_eq!(self.r, o.r);
        let mut m = QMat::zeros(self.r, self.c + o.c);
        for i in 0..self.r {
            for j in 0..self.c {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..o.c {
                m.set(i, self.c + j, o.at(i, j).clone());
            }
        }
        m
    }

    pub fn vcat(&self, o: &QMat) -> QMat {
        assert_eq!(self.c, o.c);
        let mut d = self.d.clone();
        d.extend(o.d.iter().cloned());
        QMat {
            r: self.r + o.r,
            c: self.c,
            d,
        }
    }

    pub fn inverse(&self) -> Option<QMat> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&QMat::identity(self.r))?;
        if self.rank() < self.r {
            return None;
        }
        Some(x)
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.r;
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.at(i, col).is_zero()) else {
                return Q::zero();
            };
            if p != col {
                for j in 0..n {
                    m.d.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = m.at(col, col).clone();
            det *= &piv;
            for i in col + 1..n {
                if m.at(i, col).is_zero() {
                    continue;
                }
                let f = m.at(i, col) / &piv;
                for j in col..n {
                    let v = m.at(i, j) - &f * m.at(col, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn trace(&self) -> Q {
        (0..self.r).fold(Q::zero(), |acc, i| acc + self.at(i, i))
    }

    /// Characteristic polynomial `det(xI - A)` (Faddeev–LeVerrier).
    pub fn charpoly(&self) -> QPoly {
        let n = self.r;
        let mut c = vec![Q::zero(); n + 1];
        c[n] = Q::one();
        let mut m = QMat::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = next.at(i, i) + &c[n - k + 1];
                next.set(i, i, v);
            }
            m = next;
            let am = self.mul(&m);
            c[n - k] = -am.trace() / Q::from_integer(BigInt::from(k as i64));
        }
        QPoly::new(c)
    }

    /// Minimal polynomial (monic) as the lcm of Krylov minimal polynomials.
    pub fn minpoly(&self) -> QPoly {
        let n = self.r;
        let mut acc = QPoly::constant(Q::one());
        for e in 0..n {
            let mut v = vec![Q::zero(); n];
            v[e] = Q::one();
            if acc.degree() > 0 && self.eval_poly(&acc).mul_vec(&v).iter().all(|x| x.is_zero()) {
                continue;
            }
            let local = self.krylov_minpoly(&v);
            let g = acc.gcd(&local);
            acc = acc.mul(&local.divrem(&g).0).monic();
        }
        acc
    }

    fn krylov_minpoly(&self, v: &[Q]) -> QPoly {
        let n = self.r;
        let mut vecs: Vec<Vec<Q>> = vec![v.to_vec()];
        loop {
            let next = self.mul_vec(vecs.last().unwrap());
            let basis = QMat::from_columns(n, &vecs);
            let rhs = QMat::from_columns(n, &[next.clone()]);
            if let Some(x) = basis.solve(&rhs) {
                // A^k v = sum x_i A^i v
                let mut c: Vec<Q> = (0..vecs.len()).map(|i| -x.at(i, 0).clone()).collect();
                c.push(Q::one());
                return QPoly::new(c);
            }
            vecs.push(next);
        }
    }

    /// Restriction to an invariant subspace with basis columns `b`: the
    /// matrix `m` with `self · b = b · m`; `None` if not invariant.
    pub fn restrict(&self, b: &QMat) -> Option<QMat> {
        b.solve(&self.mul(b))
    }

    /// Column space basis (maximal independent subset of the columns).
    pub fn column_basis(&self) -> QMat {
        let (_, piv) = self.rref();
        let cols: Vec<Vec<Q>> = piv.iter().map(|&j| self.column(j)).collect();
        QMat::from_columns(self.r, &cols)
    }

    /// Clear denominators column by column to get primitive integer columns.
    pub fn integral_columns(&self) -> Vec<Vec<BigInt>> {
        self.columns()
            .into_iter()
            .map(|col| {
                let scale = integer_scale(&col);
                col.iter().map(|x| (x * &scale).to_integer()).collect()
            })
            .collect()
    }
}

fn integer_scale(v: &[Q]) -> Q {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(&(x * Q::from_integer(l.clone())).to_integer());
    }
    if g.is_zero() {
        return Q::one();
    }
    Q::new(l, g.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::q;

    #[test]
    fn det_inverse_and_kernel() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), BigInt::from(1));
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).is_identity());
        let m = QMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.ncols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn characteristic_and_minimal_polynomials() {
        let a = QMat::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.charpoly(), QPoly::from_i64(&[1, -3, 1]));
        assert_eq!(a.minpoly(), QPoly::from_i64(&[1, -3, 1]));
        let i3 = QMat::identity(3);
        assert_eq!(i3.minpoly(), QPoly::from_i64(&[-1, 1]));
        assert_eq!(i3.charpoly(), QPoly::from_i64(&[-1, 3, -3, 1]));
        let j = QMat::from_i64(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[1, 0, 2, 1], &[0, 1, 1, 1]]);
        let m = QPoly::from_i64(&[1, -3, 1]);
        assert_eq!(j.minpoly(), m.mul(&m));
        assert!(j.eval_poly(&j.minpoly()).is_zero());
    }

    #[test]
    fn restriction_to_invariant_subspace() {
        let a = QMat::from_i64(&[&[2, 0], &[5, 3]]);
        let b = QMat::from_columns(2, &[vec![q(0), q(1)]]);
        let r = a.restrict(&b).unwrap();
        assert_eq!(r, QMat::from_i64(&[&[3]]));
        let c = QMat::from_columns(2, &[vec![q(1), q(0)]]);
        assert!(a.restrict(&c).is_none());
    }
}
