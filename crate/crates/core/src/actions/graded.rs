//! Graded nilpotent Lie algebras with commuting automorphisms.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::primary::{invariant_complement_rational, is_totally_reducible_rational, LinearAction, TotalReducibility};
use super::{is_zero_vec, RationalSubspace};
use crate::error::{Error, Result};
use crate::exactnum::rational::Q;
use crate::linalg::{IntMatrix, QMat};

/// One structure constant: `[e_a, e_b]` has coefficient `value` on `e_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketTerm {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    #[serde(with = "crate::exactnum::serde_num::rational")]
    pub value: Q,
}

/// Lie algebra `n = n_1 ⊕ ... ⊕ n_s` on the standard basis, with
/// commuting grading-preserving automorphisms integral on that basis.
#[derive(Clone, Debug)]
pub struct GradedAlgebraAction {
    grading: Vec<usize>,
    degree_of: Vec<usize>,
    brackets: Vec<BracketTerm>,
    table: Vec<Vec<Vec<Q>>>,
    generators: Vec<QMat>,
    name: String,
}

impl LinearAction for GradedAlgebraAction {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn rational_generators(&self) -> Vec<QMat> {
        self.generators.clone()
    }
}

impl GradedAlgebraAction {
    pub fn new(grading: Vec<usize>, brackets: Vec<BracketTerm>, generators: Vec<QMat>, name: &str) -> Result<Self> {
        let n: usize = grading.iter().sum();
        if n == 0 || grading.contains(&0) {
            return Err(Error::ShapeMismatch("grading dimensions must be positive".into()));
        }
        let degree_of: Vec<usize> = grading
            .iter()
            .enumerate()
            .flat_map(|(m, &k)| std::iter::repeat_n(m + 1, k))
            .collect();
        let mut table = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut seen = std::collections::BTreeSet::new();
        let mut norm = Vec::new();
        for t in brackets {
            if t.a >= n || t.b >= n || t.c >= n {
                return Err(Error::ShapeMismatch(format!(
                    "bracket index out of range in [{}, {}] -> {}",
                    t.a, t.b, t.c
                )));
            }
            if t.value.is_zero() {
                continue;
            }
            if t.a == t.b {
                return Err(Error::NotLieAlgebra(format!("[e_{0}, e_{0}] must vanish", t.a)));
            }
            let (a, b, v) = if t.a < t.b { (t.a, t.b, t.value) } else { (t.b, t.a, -t.value) };
            if !seen.insert((a, b, t.c)) {
                return Err(Error::InvalidInput(format!("duplicate bracket term ({a}, {b}, {})", t.c)));
            }
            if degree_of[a] + degree_of[b] != degree_of[t.c] {
                return Err(Error::NotLieAlgebra(format!(
                    "[e_{a}, e_{b}] has a component outside degree {}",
                    degree_of[a] + degree_of[b]
                )));
            }
            table[a][b][t.c] = v.clone();
            table[b][a][t.c] = -v.clone();
            norm.push(BracketTerm { a, b, c: t.c, value: v });
        }
        norm.sort_by(|x, y| (x.a, x.b, x.c).cmp(&(y.a, y.b, y.c)));
        let alg = GradedAlgebraAction {
            grading,
            degree_of,
            brackets: norm,
            table,
            generators,
            name: name.to_string(),
        };
        alg.check_jacobi()?;
        alg.check_generators()?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.degree_of.len()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn step(&self) -> usize {
        self.grading.len()
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.degree_of[i]
    }

    pub fn brackets(&self) -> &[BracketTerm] {
        &self.brackets
    }

    pub fn generators(&self) -> &[QMat] {
        &self.generators
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Generators as integer matrices (validated integral).
    pub fn integer_generators(&self) -> Vec<IntMatrix> {
        self.generators.iter().map(|g| g.to_int().expect("validated integral")).collect()
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() || a == b {
                    continue;
                }
                let coef = ua * vb;
                for (c, t) in self.table[a][b].iter().enumerate() {
                    if !t.is_zero() {
                        out[c] += &coef * t;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (ea, eb, ec) = (self.unit(a), self.unit(b), self.unit(c));
                    let t1 = self.bracket(&ea, &self.table[b][c]);
                    let t2 = self.bracket(&eb, &self.table[c][a]);
                    let t3 = self.bracket(&ec, &self.table[a][b]);
                    let ok = (0..n).all(|i| (&t1[i] + &t2[i] + &t3[i]).is_zero());
                    if !ok {
                        return Err(Error::NotLieAlgebra(format!("Jacobi identity fails for ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_generators(&self) -> Result<()> {
        let n = self.dim();
        if self.generators.is_empty() {
            return Err(Error::ShapeMismatch("at least one generator is required".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::ShapeMismatch(format!("generator {i} is not {n}x{n}")));
            }
            for r in 0..n {
                for c in 0..n {
                    let v = g.at(r, c);
                    if !v.is_zero() && self.degree_of[r] != self.degree_of[c] {
                        return Err(Error::InvalidInput(format!("generator {i} does not preserve the grading")));
                    }
                    if !v.is_integer() {
                        return Err(Error::InvalidInput(format!(
                            "generator {i} is not integral on the lattice basis"
                        )));
                    }
                }
            }
            let det = g.det();
            if det.abs() != Q::one() {
                return Err(Error::NotUnimodular {
                    index: i,
                    det: det.to_integer(),
                });
            }
            let cols = g.columns();
            for a in 0..n {
                for b in a + 1..n {
                    let lhs = g.mul_vec(&self.table[a][b]);
                    let rhs = self.bracket(&cols[a], &cols[b]);
                    if lhs != rhs {
                        return Err(Error::NotLieAlgebra(format!(
                            "generator {i} is not an automorphism on [e_{a}, e_{b}]"
                        )));
                    }
                }
            }
        }
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let (x, y) = (&self.generators[i], &self.generators[j]);
                if x.mul(y) != y.mul(x) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        Ok(())
    }

    /// Span of all brackets `[n, n]`.
    pub fn derived_subalgebra(&self) -> RationalSubspace {
        let n = self.dim();
        let vecs: Vec<Vec<Q>> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .map(|(a, b)| self.table[a][b].clone())
            .filter(|v| !is_zero_vec(v))
            .collect();
        if vecs.is_empty() {
            RationalSubspace::zero(n)
        } else {
            RationalSubspace::from_vectors(n, &vecs)
        }
    }

    /// Induced maps on `n / [n, n]`.
    pub fn abelianization(&self) -> Vec<QMat> {
        let n = self.dim();
        let d = self.derived_subalgebra();
        let r = d.dimension();
        if r == 0 {
            return self.generators.clone();
        }
        // extend a basis of [n, n] by standard vectors
        let mut cols: Vec<Vec<Q>> = d.basis().to_vec();
        for i in 0..n {
            let e = self.unit(i);
            let mut trial = cols.clone();
            trial.push(e.clone());
            if QMat::from_columns(n, &trial).rank() == trial.len() {
                cols = trial;
            }
        }
        let t = QMat::from_columns(n, &cols);
        let tinv = t.inverse().expect("basis");
        let q = n - r;
        self.generators
            .iter()
            .map(|g| {
                let conj = tinv.mul(g).mul(&t);
                let mut m = QMat::zeros(q, q);
                for i in 0..q {
                    for j in 0..q {
                        m.set(i, j, conj.at(r + i, r + j).clone());
                    }
                }
                m
            })
            .collect()
    }
}

/// Verdict for graded actions with its two ingredients.
#[derive(Clone, Debug)]
pub struct GradedReducibility {
    pub totally_reducible: bool,
    pub quotient: TotalReducibility,
    pub derived: RationalSubspace,
    pub derived_complement: Option<RationalSubspace>,
}

/// Quotient action on `n/[n,n]` totally reducible and `[n,n]` has an
/// invariant complement.
pub fn is_totally_reducible_graded(action: &GradedAlgebraAction) -> GradedReducibility {
    let derived = action.derived_subalgebra();
    let quotient = is_totally_reducible_rational(&action.abelianization());
    let derived_complement = invariant_complement_rational(&action.generators, &derived)
        .expect("[n, n] is invariant under automorphisms");
    GradedReducibility {
        totally_reducible: quotient.totally_reducible && derived_complement.is_some(),
        quotient,
        derived,
        derived_complement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::q;

    fn heis(gens: Vec<QMat>) -> Result<GradedAlgebraAction> {
        GradedAlgebraAction::new(
            vec![2, 1],
            vec![BracketTerm {
                a: 0,
                b: 1,
                c: 2,
                value: q(1),
            }],
            gens,
            "heisenberg",
        )
    }

    #[test]
    fn heisenberg_lift_of_semisimple_map() {
        let g = QMat::from_i64(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let act = heis(vec![g]).unwrap();
        assert_eq!(act.derived_subalgebra().dimension(), 1);
        let r = is_totally_reducible_graded(&act);
        assert!(r.totally_reducible);
    }

    #[test]
    fn wrong_bracket_image_is_rejected() {
        // det of the degree-1 block is 1 but degree-2 entry is -1
        let g = QMat::from_i64(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, -1]]);
        assert!(matches!(heis(vec![g]), Err(Error::NotLieAlgebra(_))));
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        let t = |a, b, c| BracketTerm { a, b, c, value: q(1) };
        // degree-1 generators e0, e1, e2 with [e0,e1]=e3, [e1,e2]=e3, [e0,e2]=e3 is fine (2-step)
        let ok = GradedAlgebraAction::new(
            vec![3, 1],
            vec![t(0, 1, 3), t(1, 2, 3), t(0, 2, 3)],
            vec![QMat::identity(4)],
            "",
        );
        assert!(ok.is_ok());
        // non-graded bracket
        let bad = GradedAlgebraAction::new(vec![2, 1], vec![t(0, 2, 1)], vec![QMat::identity(3)], "");
        assert!(matches!(bad, Err(Error::NotLieAlgebra(_))));
    }

    #[test]
    fn example_block_on_degree_one() {
        // abelian 1-step algebra: reduces to the toral check
        let g = QMat::from_i64(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[1, 0, 2, 1], &[0, 1, 1, 1]]);
        let act = GradedAlgebraAction::new(vec![4], vec![], vec![g], "").unwrap();
        assert!(!is_totally_reducible_graded(&act).totally_reducible);
    }
}
