//! Lyapunov functionals of a commuting tuple of matrices.
//!
//! Each joint generalized eigenspace is split until a single element `c`
//! generates the commutative algebra of the generators on its eigenvectors;
//! every generator is then a polynomial `f_i(c)` and each complex root `θ`
//! of the minimal polynomial of `c` yields the joint eigenvalue
//! `(f_1(θ), …, f_k(θ))`.

use super::functional::{FunctionalOrigin, LogValue, LyapunovFunctional};
use crate::actions::joint_primary_decomposition;
use crate::exactnum::croots::{certified_root_disks, value_modulus_sq};
use crate::exactnum::factor::factor_over_q;
use crate::exactnum::modulus::{root_modulus_classes, ModulusClass};
use crate::exactnum::poly::QPoly;
use crate::exactnum::rational::{q, Q};
use crate::linalg::QMat;

/// Functionals together with the modulus classes of each generator.
#[derive(Clone, Debug)]
pub struct LyapunovData {
    pub functionals: Vec<LyapunovFunctional>,
    /// Distinct root moduli of each generator's characteristic polynomial.
    pub classes: Vec<Vec<ModulusClass>>,
}

/// Distinct root moduli of `charpoly(m)`, merged across irreducible factors.
pub fn generator_classes(m: &QMat, cap_bits: u32) -> Vec<ModulusClass> {
    let cp = m.charpoly().to_primitive_int();
    let mut out: Vec<ModulusClass> = Vec::new();
    for (p, _) in factor_over_q(&cp) {
        for c in root_modulus_classes(&p) {
            let dup = out
                .iter()
                .any(|o| o.same_modulus(&c, cap_bits).expect("equality of algebraic moduli is decidable"));
            if !dup {
                out.push(c);
            }
        }
    }
    out
}

struct Piece {
    minpoly: QPoly,
    expressions: Vec<QPoly>,
    dim: usize,
}

fn vectorize(m: &QMat) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

/// Coefficients `f` with `target = f(c)` and `deg f < deg`.
fn express_as_polynomial(c: &QMat, deg: usize, target: &QMat) -> Option<QPoly> {
    let n = c.nrows();
    let mut powers = Vec::with_capacity(deg);
    let mut p = QMat::identity(n);
    for _ in 0..deg {
        powers.push(vectorize(&p));
        p = p.mul(c);
    }
    let sys = QMat::from_columns(n * n, &powers);
    let rhs = QMat::from_columns(n * n, &[vectorize(target)]);
    let sol = sys.solve(&rhs)?;
    Some(QPoly::new((0..deg).map(|i| sol.at(i, 0).clone()).collect()))
}

/// Integer weight vectors `(1, t_2, …, t_k)` ordered by max-norm.
fn weight_candidates(k: usize, max_norm: i64) -> Vec<Vec<i64>> {
    let mut out = vec![];
    for norm in 0..=max_norm {
        let mut t = vec![-norm; k - 1];
        loop {
            if t.iter().map(|x| x.abs()).max().unwrap_or(0) == norm {
                let mut v = vec![1];
                v.extend(&t);
                out.push(v);
            }
            let mut i = 0;
            while i < t.len() && t[i] == norm {
                t[i] = -norm;
                i += 1;
            }
            if i == t.len() {
                break;
            }
            t[i] += 1;
        }
    }
    out
}

fn combine(ms: &[QMat], t: &[i64]) -> QMat {
    let n = ms[0].nrows();
    ms.iter()
        .zip(t)
        .filter(|(_, &w)| w != 0)
        .fold(QMat::zeros(n, n), |acc, (m, &w)| acc.add(&m.scale(&q(w))))
}

fn eigenvector_space(ms: &[QMat], radicals: &[QPoly]) -> QMat {
    let mut stacked: Option<QMat> = None;
    for (m, p) in ms.iter().zip(radicals) {
        let e = m.eval_poly(p);
        stacked = Some(match stacked {
            None => e,
            Some(s) => s.vcat(&e),
        });
    }
    stacked.expect("at least one generator").kernel()
}

fn split_component(ms: &[QMat], radicals: &[QPoly], out: &mut Vec<Piece>) {
    let n = ms[0].nrows();
    let f = eigenvector_space(ms, radicals);
    let ns: Vec<QMat> = ms
        .iter()
        .map(|m| m.restrict(&f).expect("eigenvector space is invariant"))
        .collect();
    for t in weight_candidates(ms.len(), 64) {
        let c_f = combine(&ns, &t);
        let qpoly = c_f.minpoly();
        let factors = factor_over_q(&qpoly.to_primitive_int());
        if factors.len() > 1 {
            let c_w = combine(ms, &t);
            for (qf, _) in factors {
                let g = c_w.eval_poly(&qf.to_q()).pow(n as u64);
                let basis = g.kernel();
                let sub: Vec<QMat> = ms
                    .iter()
                    .map(|m| m.restrict(&basis).expect("generalized kernels are invariant"))
                    .collect();
                split_component(&sub, radicals, out);
            }
            return;
        }
        let deg = qpoly.degree();
        let exprs: Option<Vec<QPoly>> = ns.iter().map(|m| express_as_polynomial(&c_f, deg, m)).collect();
        if let Some(expressions) = exprs {
            out.push(Piece {
                minpoly: qpoly,
                expressions,
                dim: n,
            });
            return;
        }
    }
    panic!("no primitive element found for a joint eigenspace");
}

/// Class index of `|f_i(θ)|` for every root `θ` of `minpoly` and every `i`.
fn match_classes(classes: &[Vec<ModulusClass>], exprs: &[QPoly], minpoly: &QPoly, cap_bits: u32) -> Vec<Vec<usize>> {
    let deg = minpoly.degree();
    let mut found: Vec<Vec<Option<usize>>> = vec![vec![None; exprs.len()]; deg];
    let mut bits = 32u32;
    loop {
        let disks = certified_root_disks(minpoly, bits);
        let mut done = true;
        for (root, slot) in found.iter_mut().enumerate() {
            for (i, f) in exprs.iter().enumerate() {
                if slot[i].is_some() {
                    continue;
                }
                let iv = value_modulus_sq(f, &disks.centers[root], &disks.radii[root], bits + 16);
                let hits: Vec<usize> = (0..classes[i].len())
                    .filter(|&j| {
                        classes[i][j].refine(bits);
                        classes[i][j].squared_enclosure().intersects(&iv)
                    })
                    .collect();
                if hits.len() == 1 {
                    slot[i] = Some(hits[0]);
                } else {
                    done = false;
                }
            }
        }
        if done {
            return found.into_iter().map(|v| v.into_iter().map(Option::unwrap).collect()).collect();
        }
        assert!(bits < cap_bits.max(1 << 14), "eigenvalue matching did not converge");
        bits *= 2;
    }
}

/// Lyapunov functionals of commuting rational matrices with integral
/// characteristic polynomials.
pub fn lyapunov_data(gens: &[QMat], cap_bits: u32) -> LyapunovData {
    let classes: Vec<Vec<ModulusClass>> = gens.iter().map(|g| generator_classes(g, cap_bits)).collect();
    let mut functionals: Vec<LyapunovFunctional> = Vec::new();
    for (ci, comp) in joint_primary_decomposition(gens).into_iter().enumerate() {
        let radicals: Vec<QPoly> = comp.factors.iter().map(|p| p.to_q()).collect();
        let mut pieces = Vec::new();
        split_component(&comp.restricted, &radicals, &mut pieces);
        for piece in pieces {
            let deg = piece.minpoly.degree();
            let mult = piece.dim / deg;
            for idx in match_classes(&classes, &piece.expressions, &piece.minpoly, cap_bits) {
                if let Some(existing) = functionals.iter_mut().find(|x| x.origin.class_indices == idx) {
                    existing.multiplicity += mult;
                    if !existing.origin.components.contains(&ci) {
                        existing.origin.components.push(ci);
                    }
                } else {
                    functionals.push(LyapunovFunctional {
                        values: idx
                            .iter()
                            .enumerate()
                            .map(|(i, &j)| LogValue::LogModulus(classes[i][j].clone()))
                            .collect(),
                        multiplicity: mult,
                        origin: FunctionalOrigin {
                            components: vec![ci],
                            class_indices: idx,
                        },
                    });
                }
            }
        }
    }
    debug_assert_eq!(
        functionals.iter().map(|f| f.multiplicity).sum::<usize>(),
        gens[0].nrows()
    );
    LyapunovData { functionals, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn cartan() -> Vec<QMat> {
        let c = IntMatrix::from_i64(&[&[0, 0, -1], &[1, 0, 3], &[0, 1, 0]]);
        let b = IntMatrix::from_i64(&[&[-1, 0, -1], &[1, -1, 3], &[0, 1, -1]]);
        vec![c.to_q(), b.to_q()]
    }

    #[test]
    fn weights_are_ordered() {
        let w = weight_candidates(2, 1);
        assert_eq!(w, vec![vec![1, 0], vec![1, -1], vec![1, 1]]);
        assert_eq!(weight_candidates(1, 3), vec![vec![1]]);
    }

    #[test]
    fn anosov_automorphism_has_two_functionals() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).to_q();
        let data = lyapunov_data(&[a], 4096);
        assert_eq!(data.functionals.len(), 2);
        let mut v: Vec<f64> = data.functionals.iter().map(|f| f.approx()[0]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let l = ((3.0f64 + 5f64.sqrt()) / 2.0).ln();
        assert!((v[0] + l).abs() < 1e-9 && (v[1] - l).abs() < 1e-9);
    }

    #[test]
    fn cartan_action_functionals() {
        let data = lyapunov_data(&cartan(), 4096);
        assert_eq!(data.functionals.len(), 3);
        let s: Vec<f64> = (0..2)
            .map(|i| data.functionals.iter().map(|f| f.approx()[i]).sum())
            .collect();
        assert!(s[0].abs() < 1e-9 && s[1].abs() < 1e-9);
    }

    #[test]
    fn complex_pairs_merge() {
        // eigenvalues 1±2i
        let r = IntMatrix::from_i64(&[&[1, -2], &[2, 1]]);
        let data = lyapunov_data(&[r.to_q()], 4096);
        assert_eq!(data.functionals.len(), 1);
        assert_eq!(data.functionals[0].multiplicity, 2);
    }

    #[test]
    fn jordan_block_multiplicity() {
        let j = IntMatrix::from_i64(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[1, 0, 2, 1], &[0, 1, 1, 1]]);
        let data = lyapunov_data(&[j.to_q()], 4096);
        assert_eq!(data.functionals.len(), 2);
        assert!(data.functionals.iter().all(|f| f.multiplicity == 2));
    }
}
