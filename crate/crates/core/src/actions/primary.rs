//! Primary decompositions, invariant complements and total reducibility.

use num_traits::{One, Zero};

use super::{is_zero_vec, RationalSubspace, ValidatedAction};
use crate::error::{Error, Result};
use crate::exactnum::factor::factor_over_q;
use crate::exactnum::poly::{IntPolynomial, QPoly};
use crate::exactnum::rational::Q;
use crate::linalg::{IntMatrix, QMat};

/// Anything acting linearly on Q^n through commuting generators.
pub trait LinearAction {
    fn ambient_dim(&self) -> usize;
    fn rational_generators(&self) -> Vec<QMat>;
}

impl LinearAction for ValidatedAction {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn rational_generators(&self) -> Vec<QMat> {
        ValidatedAction::rational_generators(self)
    }
}

#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    /// Irreducible factor `P_i` of the characteristic polynomial.
    pub factor: IntPolynomial,
    /// Its exponent `d_i`.
    pub multiplicity: usize,
    /// `ker P_i(A)^{d_i}`.
    pub subspace: RationalSubspace,
}

#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    pub components: Vec<PrimaryComponent>,
    /// `ker ∏ P_i(A)`.
    pub semisimple_part: RationalSubspace,
}

fn kernel_of_poly(a: &QMat, p: &QPoly) -> QMat {
    a.eval_poly(p).kernel()
}

/// Decomposition of Q^d into generalized eigenspaces of the rational
/// irreducible factors of the characteristic polynomial.
pub fn rational_primary_decomposition(a: &IntMatrix) -> PrimaryDecomposition {
    let aq = a.to_q();
    let d = a.nrows();
    let factors = factor_over_q(&a.charpoly());
    let mut components = Vec::new();
    let mut radical = QPoly::constant(Q::one());
    for (p, mult) in factors {
        let pq = p.to_q();
        radical = radical.mul(&pq);
        let v = kernel_of_poly(&aq, &pq.pow(mult));
        components.push(PrimaryComponent {
            factor: p,
            multiplicity: mult,
            subspace: RationalSubspace::from_columns(&v),
        });
    }
    let e = kernel_of_poly(&aq, &radical);
    let semisimple_part = if e.ncols() == 0 {
        RationalSubspace::zero(d)
    } else {
        RationalSubspace::from_columns(&e)
    };
    PrimaryDecomposition {
        components,
        semisimple_part,
    }
}

/// A joint primary component: the intersection of one primary component
/// per generator.
#[derive(Clone, Debug)]
pub struct JointComponent {
    /// Basis of the component, as columns.
    pub basis: QMat,
    /// Irreducible factor attached to each generator.
    pub factors: Vec<IntPolynomial>,
    /// Exponent of that factor in the generator's characteristic polynomial
    /// restricted to the component.
    pub exponents: Vec<usize>,
    /// Generators restricted to the component (in `basis` coordinates).
    pub restricted: Vec<QMat>,
}

impl JointComponent {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Split Q^d by the primary decomposition of the first generator, restrict
/// the remaining generators to each piece, and recurse.
pub fn joint_primary_decomposition(gens: &[QMat]) -> Vec<JointComponent> {
    let d = gens[0].nrows();
    let mut comps = vec![JointComponent {
        basis: QMat::identity(d),
        factors: vec![],
        exponents: vec![],
        restricted: gens.to_vec(),
    }];
    for i in 0..gens.len() {
        let mut next = Vec::new();
        for c in comps {
            let mi = &c.restricted[i];
            let cp = mi.charpoly().to_primitive_int();
            for (p, mult) in factor_over_q(&cp) {
                let v = kernel_of_poly(mi, &p.to_q().pow(mult));
                let basis = c.basis.mul(&v);
                let restricted = c
                    .restricted
                    .iter()
                    .map(|m| m.restrict(&v).expect("commuting generators preserve primary components"))
                    .collect();
                let mut factors = c.factors.clone();
                factors.push(p);
                let mut exponents = c.exponents.clone();
                exponents.push(mult);
                next.push(JointComponent {
                    basis,
                    factors,
                    exponents,
                    restricted,
                });
            }
        }
        comps = next;
    }
    comps
}

/// Invariant complement of an invariant subspace `u`.
pub fn invariant_complement<A: LinearAction>(action: &A, u: &RationalSubspace) -> Result<Option<RationalSubspace>> {
    invariant_complement_rational(&action.rational_generators(), u)
}

/// Solves `X A_i = M_i X`, `X B = I` for `X` (r×d), where `B` spans `u` and
/// `A_i B = B M_i`; then `ker X` is the complement.
pub fn invariant_complement_rational(gens: &[QMat], u: &RationalSubspace) -> Result<Option<RationalSubspace>> {
    let d = u.ambient_dim();
    let r = u.dimension();
    let b = u.matrix();
    let mut ms = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        if r == 0 {
            break;
        }
        match g.restrict(&b) {
            Some(m) => ms.push(m),
            None => return Err(Error::NotInvariant(i)),
        }
    }
    if r == 0 {
        return Ok(Some(RationalSubspace::whole(d)));
    }
    if r == d {
        return Ok(Some(RationalSubspace::zero(d)));
    }
    let nvar = r * d;
    let var = |a: usize, col: usize| a * d + col;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for (g, m) in gens.iter().zip(&ms) {
        for a in 0..r {
            for c in 0..d {
                let mut row = vec![Q::zero(); nvar];
                for bb in 0..d {
                    let v = g.at(bb, c);
                    if !v.is_zero() {
                        row[var(a, bb)] += v;
                    }
                }
                for e in 0..r {
                    let v = m.at(a, e);
                    if !v.is_zero() {
                        row[var(e, c)] -= v;
                    }
                }
                if !is_zero_vec(&row) {
                    rows.push(row);
                    rhs.push(Q::zero());
                }
            }
        }
    }
    for a in 0..r {
        for j in 0..r {
            let mut row = vec![Q::zero(); nvar];
            for bb in 0..d {
                row[var(a, bb)] = b.at(bb, j).clone();
            }
            rows.push(row);
            rhs.push(if a == j { Q::one() } else { Q::zero() });
        }
    }
    let sys = QMat::from_rows(rows);
    let rhs = QMat::from_columns(rhs.len(), &[rhs]);
    let Some(sol) = sys.solve(&rhs) else {
        return Ok(None);
    };
    let mut x = QMat::zeros(r, d);
    for a in 0..r {
        for c in 0..d {
            x.set(a, c, sol.at(var(a, c), 0).clone());
        }
    }
    let c = RationalSubspace::from_columns(&x.kernel());
    debug_assert!(c.is_complement_of(u));
    debug_assert!(gens.iter().all(|g| c.is_invariant_under(g)));
    Ok(Some(c))
}

/// Verdict of the total reducibility check with its evidence.
#[derive(Clone, Debug)]
pub struct TotalReducibility {
    pub totally_reducible: bool,
    /// Joint primary components; each is an invariant complement of the
    /// sum of the others.
    pub witness: Vec<JointComponent>,
    /// Generator index and its invariant subspace `E(A_i)` admitting no
    /// invariant complement.
    pub obstruction: Option<(usize, RationalSubspace)>,
}

pub fn is_totally_reducible(action: &ValidatedAction) -> TotalReducibility {
    is_totally_reducible_rational(&action.rational_generators())
}

/// Total reducibility of commuting rational matrices.
///
/// A proper `E(A_i) = ker ∏ P(A_i)` never has an invariant complement, so it
/// is returned as obstruction. When every `E(A_i)` is the whole space the
/// joint primary components split the space into invariant pieces.
pub fn is_totally_reducible_rational(gens: &[QMat]) -> TotalReducibility {
    let d = gens[0].nrows();
    for (i, g) in gens.iter().enumerate() {
        let rad = g.minpoly().squarefree();
        let e = kernel_of_poly(g, &rad);
        if e.ncols() < d {
            let u = RationalSubspace::from_columns(&e);
            let comp = invariant_complement_rational(gens, &u).expect("E(A_i) is invariant under commuting maps");
            if comp.is_none() {
                return TotalReducibility {
                    totally_reducible: false,
                    witness: vec![],
                    obstruction: Some((i, u)),
                };
            }
        }
    }
    let witness = joint_primary_decomposition(gens);
    debug_assert_eq!(witness.iter().map(|c| c.dim()).sum::<usize>(), d);
    TotalReducibility {
        totally_reducible: true,
        witness,
        obstruction: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::validate;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn example_block() -> IntMatrix {
        m(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[1, 0, 2, 1], &[0, 1, 1, 1]])
    }

    #[test]
    fn primary_decomposition_examples() {
        let pd = rational_primary_decomposition(&m(&[&[2, 1], &[1, 1]]));
        assert_eq!(pd.components.len(), 1);
        assert_eq!(pd.components[0].multiplicity, 1);
        assert_eq!(pd.semisimple_part.dimension(), 2);
        let pd = rational_primary_decomposition(&example_block());
        assert_eq!(pd.components.len(), 1);
        assert_eq!(pd.components[0].multiplicity, 2);
        assert_eq!(pd.components[0].subspace.dimension(), 4);
        assert_eq!(pd.semisimple_part.dimension(), 2);
        let pd = rational_primary_decomposition(&IntMatrix::identity(2));
        assert_eq!(pd.components[0].factor, IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(pd.components[0].multiplicity, 2);
        assert_eq!(pd.semisimple_part.dimension(), 2);
    }

    #[test]
    fn complements() {
        let act = validate(vec![example_block()]).unwrap();
        let e = rational_primary_decomposition(&example_block()).semisimple_part;
        assert_eq!(invariant_complement(&act, &e).unwrap(), None);
        assert_eq!(
            invariant_complement(&act, &RationalSubspace::whole(4)).unwrap().unwrap().dimension(),
            0
        );
        let blocks = IntMatrix::block_diag(&[m(&[&[2, 1], &[1, 1]]), m(&[&[1, 1], &[1, 2]])]);
        let act = validate(vec![blocks]).unwrap();
        let u = RationalSubspace::from_vectors(
            4,
            &[
                vec![Q::one(), Q::zero(), Q::zero(), Q::zero()],
                vec![Q::zero(), Q::one(), Q::zero(), Q::zero()],
            ],
        );
        let c = invariant_complement(&act, &u).unwrap().unwrap();
        assert_eq!(c.dimension(), 2);
        assert!(c.is_complement_of(&u));
        let not_inv = RationalSubspace::from_vectors(4, &[vec![Q::one(), Q::zero(), Q::zero(), Q::zero()]]);
        assert_eq!(invariant_complement(&act, &not_inv), Err(Error::NotInvariant(0)));
    }

    #[test]
    fn total_reducibility() {
        let tr = is_totally_reducible(&validate(vec![example_block()]).unwrap());
        assert!(!tr.totally_reducible);
        assert_eq!(tr.obstruction.as_ref().unwrap().1.dimension(), 2);
        let a = m(&[&[2, 1], &[1, 1]]);
        let tr = is_totally_reducible(&validate(vec![a.clone()]).unwrap());
        assert!(tr.totally_reducible);
        let blocks = IntMatrix::block_diag(&[a.clone(), IntMatrix::identity(1)]);
        let other = IntMatrix::block_diag(&[IntMatrix::identity(2), m(&[&[-1]])]);
        let tr = is_totally_reducible(&validate(vec![blocks, other]).unwrap());
        assert!(tr.totally_reducible);
        assert_eq!(tr.witness.len(), 2);
    }
}
