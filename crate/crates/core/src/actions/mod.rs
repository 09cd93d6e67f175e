//! Z^k actions by toral automorphisms and graded nilpotent Lie algebra
//! automorphisms: validation, semisimplicity, primary decompositions and
//! total reducibility.

mod graded;
mod primary;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::modulus::has_unit_modulus_root;
use crate::exactnum::poly::IntPolynomial;
use crate::exactnum::rational::Q;
use crate::linalg::{IntMatrix, QMat};

pub use graded::{is_totally_reducible_graded, BracketTerm, GradedAlgebraAction, GradedReducibility};
pub use primary::{
    invariant_complement, invariant_complement_rational, is_totally_reducible, is_totally_reducible_rational,
    joint_primary_decomposition, rational_primary_decomposition, JointComponent, LinearAction, PrimaryComponent,
    PrimaryDecomposition, TotalReducibility,
};

/// A tuple of pairwise commuting unimodular integer matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidatedAction {
    dim: usize,
    generators: Vec<IntMatrix>,
    name: String,
}

impl ValidatedAction {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn rational_generators(&self) -> Vec<QMat> {
        self.generators.iter().map(|g| g.to_q()).collect()
    }

    /// `∏ A_i^{b_i}` for an integer vector `b`.
    pub fn element(&self, b: &[i64]) -> IntMatrix {
        assert_eq!(b.len(), self.rank());
        self.generators
            .iter()
            .zip(b)
            .fold(IntMatrix::identity(self.dim), |acc, (g, &e)| acc.mul(&g.pow_signed(e)))
    }
}

/// Check shape, unimodularity and commutativity.
pub fn validate(generators: Vec<IntMatrix>) -> Result<ValidatedAction> {
    validate_named(generators, "")
}

pub fn validate_named(generators: Vec<IntMatrix>, name: &str) -> Result<ValidatedAction> {
    let Some(first) = generators.first() else {
        return Err(Error::ShapeMismatch("at least one generator is required".into()));
    };
    let d = first.nrows();
    if d == 0 {
        return Err(Error::ShapeMismatch("matrices must be at least 1x1".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if g.nrows() != d || !g.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "generator {i} is not a {d}x{d} matrix"
            )));
        }
    }
    for (i, g) in generators.iter().enumerate() {
        let det = g.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular { index: i, det });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if generators[i].mul(&generators[j]) != generators[j].mul(&generators[i]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(ValidatedAction {
        dim: d,
        generators,
        name: name.to_string(),
    })
}

/// Rational subspace of Q^n given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl RationalSubspace {
    /// Span of the columns of `m` (dependent columns are dropped).
    pub fn from_columns(m: &QMat) -> Self {
        let b = m.column_basis();
        RationalSubspace {
            ambient: m.nrows(),
            basis: b.columns(),
        }
    }

    pub fn from_vectors(ambient: usize, vecs: &[Vec<Q>]) -> Self {
        Self::from_columns(&QMat::from_columns(ambient, vecs))
    }

    pub fn whole(n: usize) -> Self {
        Self::from_columns(&QMat::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        RationalSubspace {
            ambient: n,
            basis: vec![],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn matrix(&self) -> QMat {
        QMat::from_columns(self.ambient, &self.basis)
    }

    /// Basis vectors scaled to primitive integer vectors.
    pub fn integral_basis(&self) -> Vec<Vec<BigInt>> {
        self.matrix().integral_columns()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        self.matrix().solve(&QMat::from_columns(self.ambient, &[v.to_vec()])).is_some()
    }

    pub fn is_invariant_under(&self, a: &QMat) -> bool {
        self.basis.iter().all(|b| self.contains(&a.mul_vec(b)))
    }

    pub fn sum(&self, o: &RationalSubspace) -> RationalSubspace {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        if v.is_empty() {
            return Self::zero(self.ambient);
        }
        Self::from_vectors(self.ambient, &v)
    }

    /// Whether `self ∩ o = 0` and `self + o` is the whole space.
    pub fn is_complement_of(&self, o: &RationalSubspace) -> bool {
        self.dimension() + o.dimension() == self.ambient && self.sum(o).dimension() == self.ambient
    }
}

/// Minimal polynomial of an integer matrix (monic, integer coefficients).
pub fn minimal_polynomial(a: &IntMatrix) -> IntPolynomial {
    a.to_q()
        .minpoly()
        .to_integer_exact()
        .expect("minimal polynomial of an integer matrix is integral")
}

/// Every generator diagonalizable over C.
pub fn is_semisimple(action: &ValidatedAction) -> bool {
    action.generators.iter().all(|g| matrix_is_semisimple(&g.to_q()))
}

pub fn matrix_is_semisimple(a: &QMat) -> bool {
    let m = a.minpoly();
    m.gcd(&m.derivative()).degree() == 0
}

/// No eigenvalue on the unit circle.
pub fn is_anosov_matrix(a: &IntMatrix) -> bool {
    !has_unit_modulus_root(&a.charpoly())
}

pub(crate) fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn validation_examples() {
        let a = validate(vec![m(&[&[2, 1], &[1, 1]])]).unwrap();
        assert_eq!((a.dim(), a.rank()), (2, 1));
        assert!(validate(vec![m(&[&[1, 0], &[0, 1]]), m(&[&[2, 1], &[1, 1]])]).is_ok());
        assert_eq!(
            validate(vec![m(&[&[2, 0], &[0, 1]])]),
            Err(Error::NotUnimodular {
                index: 0,
                det: BigInt::from(2)
            })
        );
        assert_eq!(
            validate(vec![m(&[&[1, 1], &[0, 1]]), m(&[&[1, 0], &[1, 1]])]),
            Err(Error::NonCommuting(0, 1))
        );
        assert!(matches!(
            validate(vec![m(&[&[1, 0], &[0, 1]]), m(&[&[1]])]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(minimal_polynomial(&IntMatrix::identity(3)), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(
            minimal_polynomial(&m(&[&[2, 1], &[1, 1]])),
            IntPolynomial::from_i64(&[1, -3, 1])
        );
        let j = m(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[1, 0, 2, 1], &[0, 1, 1, 1]]);
        assert_eq!(minimal_polynomial(&j), IntPolynomial::from_i64(&[1, -3, 1]).pow(2));
    }

    #[test]
    fn semisimplicity_and_anosov() {
        let j = m(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[1, 0, 2, 1], &[0, 1, 1, 1]]);
        assert!(!is_semisimple(&validate(vec![j]).unwrap()));
        assert!(is_semisimple(&validate(vec![IntMatrix::identity(3)]).unwrap()));
        assert!(is_anosov_matrix(&m(&[&[2, 1], &[1, 1]])));
        assert!(!is_anosov_matrix(&IntMatrix::identity(2)));
        assert!(!is_anosov_matrix(&m(&[&[1, 1], &[0, 1]])));
    }
}
