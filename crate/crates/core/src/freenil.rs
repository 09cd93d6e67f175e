//! Free nilpotent Lie algebras on a Hall basis and the lift of toral
//! automorphisms to their graded automorphisms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::actions::{matrix_is_semisimple, BracketTerm, ValidatedAction};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::modulus::has_unit_modulus_root;
use crate::exactnum::rational::{Interval, Q};
use crate::linalg::{IntMatrix, QMat};
use crate::weyl::{is_tns, lyapunov_data, weyl_chambers, ChamberDecomposition, LyapunovData, TnsReport};

/// A Hall basis element: a letter or a bracket of two earlier elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HallElement {
    Letter(usize),
    Bracket(usize, usize),
}

/// Hall basis of the free nilpotent Lie algebra of a given rank and step,
/// listed by degree.
#[derive(Clone, Debug, Serialize)]
pub struct HallBasis {
    pub rank: usize,
    pub step: usize,
    pub elements: Vec<HallElement>,
    pub degrees: Vec<usize>,
    /// Number of elements of each degree `1..=step`.
    pub dims: Vec<usize>,
}

impl HallBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Indices of the elements of degree `n`.
    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        let start: usize = self.dims[..n - 1].iter().sum();
        start..start + self.dims[n - 1]
    }

    /// Bracket notation, with letters `x1, x2, …`.
    pub fn label(&self, i: usize) -> String {
        match self.elements[i] {
            HallElement::Letter(j) => format!("x{}", j + 1),
            HallElement::Bracket(a, b) => format!("[{}, {}]", self.label(a), self.label(b)),
        }
    }
}

/// Number of Lyndon words of length `n` over `k` letters.
pub fn witt_dimension(k: usize, n: usize) -> usize {
    fn mobius(mut n: usize) -> i64 {
        let mut r = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if n > 1 {
            r = -r;
        }
        r
    }
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            total += mobius(d) as i128 * (k as i128).pow((n / d) as u32);
        }
    }
    (total / n as i128) as usize
}

/// Hall basis: `[u, v]` with `u > v`, and `v ≥ w` whenever `u = [t, w]`.
pub fn hall_basis(rank: usize, step: usize, size_cap: usize) -> Result<HallBasis> {
    if rank == 0 || step == 0 {
        return Err(Error::InvalidInput("rank and step must be positive".into()));
    }
    let total: usize = (1..=step).map(|n| witt_dimension(rank, n)).sum();
    if total > size_cap {
        return Err(Error::SizeCap { dim: total, cap: size_cap });
    }
    let mut elements: Vec<HallElement> = (0..rank).map(HallElement::Letter).collect();
    let mut degrees = vec![1; rank];
    let mut dims = vec![rank];
    for n in 2..=step {
        let before = elements.len();
        for u in 0..before {
            for v in 0..u {
                if degrees[u] + degrees[v] != n {
                    continue;
                }
                if let HallElement::Bracket(_, w) = elements[u] {
                    if v < w {
                        continue;
                    }
                }
                elements.push(HallElement::Bracket(u, v));
                degrees.push(n);
            }
        }
        dims.push(elements.len() - before);
    }
    Ok(HallBasis {
        rank,
        step,
        elements,
        degrees,
        dims,
    })
}

type Word = Vec<usize>;
type AssocPoly = BTreeMap<Word, BigInt>;

fn poly_mul(p: &AssocPoly, q: &AssocPoly) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (w1, c1) in p {
        for (w2, c2) in q {
            let mut w = w1.clone();
            w.extend(w2);
            *out.entry(w).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn commutator(p: &AssocPoly, q: &AssocPoly) -> AssocPoly {
    let mut out = poly_mul(p, q);
    for (w, c) in poly_mul(q, p) {
        *out.entry(w).or_insert_with(BigInt::zero) -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Coordinates in the Hall basis of homogeneous Lie polynomials.
struct Coordinates {
    /// Per degree: pivot words and the inverse of the Hall polynomials
    /// restricted to them.
    per_degree: Vec<(Vec<Word>, QMat)>,
}

impl Coordinates {
    fn new(basis: &HallBasis, polys: &[AssocPoly]) -> Self {
        let mut per_degree = Vec::new();
        for n in 1..=basis.step {
            let range = basis.degree_range(n);
            let mut words: Vec<Word> = polys[range.clone()].iter().flat_map(|p| p.keys().cloned()).collect();
            words.sort();
            words.dedup();
            let cols: Vec<Vec<Q>> = range
                .clone()
                .map(|h| words.iter().map(|w| Q::from(polys[h].get(w).cloned().unwrap_or_default())).collect())
                .collect();
            let m = QMat::from_columns(words.len(), &cols);
            // pivot rows of m are pivot columns of its transpose
            let (_, pivots) = m.transpose().rref();
            let pivot_words: Vec<Word> = pivots.iter().map(|&r| words[r].clone()).collect();
            let square = QMat::from_rows(pivots.iter().map(|&r| m.row(r)).collect());
            let inv = square.inverse().expect("Hall polynomials are linearly independent");
            per_degree.push((pivot_words, inv));
        }
        Coordinates { per_degree }
    }

    fn coords(&self, n: usize, p: &AssocPoly) -> Vec<Q> {
        let (words, inv) = &self.per_degree[n - 1];
        let v: Vec<Q> = words.iter().map(|w| Q::from(p.get(w).cloned().unwrap_or_default())).collect();
        inv.mul_vec(&v)
    }
}

/// Associative polynomials of the Hall elements with letters substituted.
fn hall_polynomials(basis: &HallBasis, letters: &[AssocPoly]) -> Vec<AssocPoly> {
    let mut out: Vec<AssocPoly> = Vec::with_capacity(basis.dim());
    for e in &basis.elements {
        let p = match *e {
            HallElement::Letter(j) => letters[j].clone(),
            HallElement::Bracket(a, b) => commutator(&out[a], &out[b]),
        };
        out.push(p);
    }
    out
}

fn letter_polys(rank: usize) -> Vec<AssocPoly> {
    (0..rank).map(|j| AssocPoly::from([(vec![j], BigInt::from(1))])).collect()
}

fn to_integer_vec(v: Vec<Q>) -> Vec<BigInt> {
    v.into_iter()
        .map(|x| {
            assert!(x.is_integer(), "Hall coordinates of Lie ring elements are integral");
            x.to_integer()
        })
        .collect()
}

/// Free nilpotent Lie algebra with its structure constants.
pub struct FreeNilpotentAlgebra {
    pub basis: HallBasis,
    polys: Vec<AssocPoly>,
    coords: Coordinates,
}

impl FreeNilpotentAlgebra {
    pub fn new(rank: usize, step: usize, size_cap: usize) -> Result<Self> {
        let basis = hall_basis(rank, step, size_cap)?;
        let polys = hall_polynomials(&basis, &letter_polys(rank));
        let coords = Coordinates::new(&basis, &polys);
        Ok(FreeNilpotentAlgebra { basis, polys, coords })
    }

    /// Nonzero structure constants `[e_a, e_b] = Σ c e_c` for `a < b`.
    pub fn structure_constants(&self) -> Vec<BracketTerm> {
        let mut out = Vec::new();
        let b = &self.basis;
        for x in 0..b.dim() {
            for y in x + 1..b.dim() {
                let n = b.degrees[x] + b.degrees[y];
                if n > b.step {
                    continue;
                }
                let c = self.coords.coords(n, &commutator(&self.polys[x], &self.polys[y]));
                let off = b.degree_range(n).start;
                for (i, v) in c.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.push(BracketTerm {
                            a: x,
                            b: y,
                            c: off + i,
                            value: v,
                        });
                    }
                }
            }
        }
        out
    }

    /// Degree blocks of the automorphism extending `a` on the letters.
    pub fn lift_matrix(&self, a: &IntMatrix) -> Vec<IntMatrix> {
        let k = self.basis.rank;
        assert_eq!(a.nrows(), k);
        let letters: Vec<AssocPoly> = (0..k)
            .map(|i| {
                let mut p = AssocPoly::new();
                for j in 0..k {
                    let c = a.get(j, i);
                    if !c.is_zero() {
                        p.insert(vec![j], c.clone());
                    }
                }
                p
            })
            .collect();
        let images = hall_polynomials(&self.basis, &letters);
        (1..=self.basis.step)
            .map(|n| {
                let range = self.basis.degree_range(n);
                let cols: Vec<Vec<BigInt>> = range
                    .map(|h| to_integer_vec(self.coords.coords(n, &images[h])))
                    .collect();
                let m = cols.len();
                IntMatrix::new((0..m).map(|r| (0..m).map(|c| cols[c][r].clone()).collect()).collect())
            })
            .collect()
    }
}

/// Lift of a toral action to the free nilpotent Lie algebra of its rank.
#[derive(Clone, Debug, Serialize)]
pub struct FreeNilpotentLift {
    pub basis: HallBasis,
    /// Per generator, the blocks on each degree.
    pub blocks: Vec<Vec<IntMatrix>>,
    #[serde(skip)]
    pub brackets: Vec<BracketTerm>,
}

impl FreeNilpotentLift {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Block diagonal matrix of generator `i`.
    pub fn full_matrix(&self, i: usize) -> IntMatrix {
        IntMatrix::block_diag(&self.blocks[i])
    }

    /// Degree blocks of `∏ A_i^{b_i}`.
    pub fn element_blocks(&self, b: &[i64]) -> Vec<IntMatrix> {
        (0..self.basis.step)
            .map(|n| {
                let m = self.blocks[0][n].nrows();
                self.blocks
                    .iter()
                    .zip(b)
                    .fold(IntMatrix::identity(m), |acc, (g, &e)| acc.mul(&g[n].pow_signed(e)))
            })
            .collect()
    }
}

pub fn free_nilpotent_lift(action: &ValidatedAction, step: usize, size_cap: usize) -> Result<FreeNilpotentLift> {
    let alg = FreeNilpotentAlgebra::new(action.dim(), step, size_cap)?;
    let blocks = action.generators().iter().map(|g| alg.lift_matrix(g)).collect();
    Ok(FreeNilpotentLift {
        brackets: alg.structure_constants(),
        basis: alg.basis,
        blocks,
    })
}

/// `∏ A_i^{b_i}` acts hyperbolically on every degree of the lift.
pub fn lift_is_anosov(lift: &FreeNilpotentLift, b: &[i64]) -> bool {
    lift.element_blocks(b)
        .iter()
        .all(|blk| !has_unit_modulus_root(&blk.charpoly()))
}

/// Dynamics of the lifted action.
#[derive(Clone, Debug)]
pub struct LiftReport {
    pub dims: Vec<usize>,
    pub semisimple: bool,
    pub lyapunov: LyapunovData,
    pub base: LyapunovData,
    /// For each lifted functional of degree `n`, base functionals (with
    /// repetition) whose sum it equals.
    pub decompositions: Vec<Option<Vec<usize>>>,
    pub tns: Result<TnsReport>,
    pub chambers: Result<ChamberDecomposition>,
    /// Hyperbolicity of the lift at each chamber witness.
    pub anosov_per_chamber: Option<Vec<bool>>,
}

/// Multisets of `n` base functionals (indices, non-decreasing).
fn multisets(count: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(count, n - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..count {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

pub fn lift_report(action: &ValidatedAction, step: usize, cfg: &Config) -> Result<LiftReport> {
    let lift = free_nilpotent_lift(action, step, cfg.size_cap)?;
    let full: Vec<IntMatrix> = (0..action.rank()).map(|i| lift.full_matrix(i)).collect();
    let fq: Vec<QMat> = full.iter().map(|m| m.to_q()).collect();
    let semisimple = fq.iter().all(matrix_is_semisimple);
    let base = lyapunov_data(&action.rational_generators(), cfg.precision_cap_bits);
    let lyapunov = lyapunov_data(&fq, cfg.precision_cap_bits);
    let decompositions = decompose_lifted(&lift, &base, &lyapunov);
    let tns = is_tns(&lyapunov.functionals, cfg);
    let chambers = weyl_chambers(&lyapunov.functionals, cfg);
    let anosov_per_chamber = chambers
        .as_ref()
        .ok()
        .map(|dec| dec.chambers.iter().map(|c| lift_is_anosov(&lift, &c.witness)).collect());
    Ok(LiftReport {
        dims: lift.basis.dims.clone(),
        semisimple,
        lyapunov,
        base,
        decompositions,
        tns,
        chambers,
        anosov_per_chamber,
    })
}

/// Match each lifted functional with a sum of `n ≤ step` base functionals
/// whose enclosures agree at `MATCH_BITS`.
fn decompose_lifted(lift: &FreeNilpotentLift, base: &LyapunovData, lifted: &LyapunovData) -> Vec<Option<Vec<usize>>> {
    const MATCH_BITS: u32 = 96;
    let nb = base.functionals.len();
    let k = lift.blocks.len();
    let base_vals: Vec<Vec<Interval>> = base.functionals.iter().map(|f| f.enclosures(MATCH_BITS)).collect();
    let candidates: Vec<Vec<usize>> = (1..=lift.basis.step).flat_map(|n| multisets(nb, n)).collect();
    lifted
        .functionals
        .iter()
        .map(|f| {
            let target = f.enclosures(MATCH_BITS);
            candidates
                .iter()
                .find(|ms| {
                    (0..k).all(|i| {
                        let s = ms.iter().fold(Interval::zero(), |acc, &j| acc.add(&base_vals[j][i]));
                        s.intersects(&target[i])
                    })
                })
                .cloned()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_numbers() {
        assert_eq!(witt_dimension(2, 1), 2);
        assert_eq!(witt_dimension(2, 2), 1);
        assert_eq!(witt_dimension(2, 3), 2);
        assert_eq!(witt_dimension(3, 2), 3);
        assert_eq!(witt_dimension(2, 6), 9);
        assert_eq!(witt_dimension(3, 4), 18);
    }

    #[test]
    fn hall_dims() {
        assert_eq!(hall_basis(2, 2, 2000).unwrap().dims, vec![2, 1]);
        assert_eq!(hall_basis(2, 3, 2000).unwrap().dims, vec![2, 1, 2]);
        assert_eq!(hall_basis(3, 2, 2000).unwrap().dims, vec![3, 3]);
        for k in 1..=4 {
            for s in 1..=4 {
                let b = hall_basis(k, s, 2000).unwrap();
                let w: Vec<usize> = (1..=s).map(|n| witt_dimension(k, n)).collect();
                assert_eq!(b.dims, w);
            }
        }
        assert!(matches!(hall_basis(4, 6, 100), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn free_algebra_is_lie() {
        let alg = FreeNilpotentAlgebra::new(2, 4, 2000).unwrap();
        let grading = alg.basis.dims.clone();
        let n = alg.basis.dim();
        let ga = crate::actions::GradedAlgebraAction::new(grading, alg.structure_constants(), vec![QMat::identity(n)], "");
        assert!(ga.is_ok());
    }

    #[test]
    fn golden_lift() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let act = crate::actions::validate(vec![a.clone()]).unwrap();
        let lift = free_nilpotent_lift(&act, 2, 2000).unwrap();
        assert_eq!(lift.blocks[0][0], a);
        assert_eq!(lift.blocks[0][1], IntMatrix::from_i64(&[&[1]]));
        assert!(!lift_is_anosov(&lift, &[1]));
        let lift3 = free_nilpotent_lift(&act, 3, 2000).unwrap();
        assert!(!lift_is_anosov(&lift3, &[1]));
    }

    #[test]
    fn lift_is_functorial() {
        let a = IntMatrix::from_i64(&[&[2, 1, 0], &[1, 1, 1], &[0, 1, 3]]);
        let b = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[1, 0, 1]]);
        let alg = FreeNilpotentAlgebra::new(3, 3, 2000).unwrap();
        let la = alg.lift_matrix(&a);
        let lb = alg.lift_matrix(&b);
        let lab = alg.lift_matrix(&a.mul(&b));
        for n in 0..3 {
            assert_eq!(lab[n], la[n].mul(&lb[n]));
        }
    }

    #[test]
    fn cartan_lift_report() {
        let c = IntMatrix::from_i64(&[&[0, 0, -1], &[1, 0, 3], &[0, 1, 0]]);
        let b = IntMatrix::from_i64(&[&[-1, 0, -1], &[1, -1, 3], &[0, 1, -1]]);
        let act = crate::actions::validate(vec![c, b]).unwrap();
        let r = lift_report(&act, 2, &Config::default()).unwrap();
        assert_eq!(r.dims, vec![3, 3]);
        assert!(r.decompositions.iter().all(|d| d.is_some()));
        assert_eq!(r.lyapunov.functionals.len(), 6);
    }
}
