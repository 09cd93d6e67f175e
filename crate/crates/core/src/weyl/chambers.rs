//! Weyl chambers: connected components of the complement of the Lyapunov
//! hyperplanes, each with a certified lattice witness.

use num_traits::{Signed, Zero};

use super::classes::{
    coarse_classes, lyapunov_hyperplanes, round_to_lattice, CoarseClass, Hyperplane, SignOracle, WITNESS_BITS,
};
use super::functional::LyapunovFunctional;
use super::lp::max_margin;
use super::planar::PlanarArrangement;
use crate::actions::is_anosov_matrix;
use crate::config::Config;
use crate::error::Result;
use crate::exactnum::rational::{floor_dyadic, pow2, q, to_f64, Q};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    /// Lattice point in the open chamber.
    pub witness: Vec<i64>,
    /// Sign of each hyperplane's leading functional on the chamber.
    pub hyperplane_signs: Vec<i32>,
    /// Sign of each coarse class on the chamber.
    pub class_signs: Vec<i32>,
}

#[derive(Clone, Debug)]
pub struct ChamberDecomposition {
    pub rank: usize,
    pub classes: Vec<CoarseClass>,
    pub hyperplanes: Vec<Hyperplane>,
    /// Counter-clockwise order for rank 2.
    pub chambers: Vec<Chamber>,
}

/// Precision ceiling for the sign-vector programs in rank ≥ 3.
const LP_CAP_BITS: u32 = 512;

fn class_signs(hyperplanes: &[Hyperplane], nclasses: usize, hsigns: &[i32]) -> Vec<i32> {
    let mut out = vec![0; nclasses];
    for (h, &s) in hyperplanes.iter().zip(hsigns) {
        for &(c, rel) in &h.classes {
            out[c] = s * rel;
        }
    }
    out
}

fn oracles_for(
    functionals: &[LyapunovFunctional],
    classes: &[CoarseClass],
    hyperplanes: &[Hyperplane],
    cfg: &Config,
) -> Vec<SignOracle> {
    hyperplanes
        .iter()
        .map(|h| SignOracle::new(&functionals[classes[h.leading_class()].representative()], cfg))
        .collect()
}

/// Chambers of the arrangement of Lyapunov hyperplanes.
pub fn weyl_chambers(functionals: &[LyapunovFunctional], cfg: &Config) -> Result<ChamberDecomposition> {
    let classes = coarse_classes(functionals, cfg)?;
    let hyperplanes = lyapunov_hyperplanes(functionals, &classes, cfg)?;
    let rank = functionals.first().map_or(0, |f| f.rank());
    let oracles = oracles_for(functionals, &classes, &hyperplanes, cfg);
    let signed: Vec<(Vec<i64>, Vec<i32>)> = if hyperplanes.is_empty() {
        let mut e1 = vec![0; rank.max(1)];
        e1[0] = 1;
        vec![(e1, vec![])]
    } else if rank == 1 {
        [vec![1i64], vec![-1i64]]
            .into_iter()
            .map(|b| {
                let s = oracles.iter().map(|o| o.sign_i64(&b, cfg.precision_cap_bits).unwrap()).collect();
                (b, s)
            })
            .collect()
    } else if rank == 2 {
        planar_chambers(&oracles, cfg)?
    } else {
        lp_chambers(&oracles, rank, cfg)?
    };
    let chambers = signed
        .into_iter()
        .map(|(witness, hyperplane_signs)| Chamber {
            class_signs: class_signs(&hyperplanes, classes.len(), &hyperplane_signs),
            witness,
            hyperplane_signs,
        })
        .collect();
    Ok(ChamberDecomposition {
        rank,
        classes,
        hyperplanes,
        chambers,
    })
}

fn planar_chambers(oracles: &[SignOracle], cfg: &Config) -> Result<Vec<(Vec<i64>, Vec<i32>)>> {
    let arr = PlanarArrangement::new(oracles, [vec![1, 0], vec![0, 1]], cfg.precision_cap_bits)?;
    (0..arr.chamber_count())
        .map(|m| {
            let b = arr.sector_witness(m, cfg.witness_cap)?;
            let s = (0..oracles.len()).map(|l| arr.expected_sign(l, m)).collect();
            Ok((b, s))
        })
        .collect()
}

fn approx_rows(oracles: &[SignOracle], bits: u32) -> Vec<Vec<Q>> {
    oracles
        .iter()
        .map(|o| {
            let row: Vec<Q> = o
                .functional()
                .enclosures(bits)
                .iter()
                .map(|iv| floor_dyadic(&iv.mid(), bits))
                .collect();
            let m = row.iter().map(|x| x.abs()).fold(Q::zero(), |a, x| if x > a { x } else { a });
            row.iter().map(|x| x / &m).collect()
        })
        .collect()
}

/// Lattice point realizing the signs `sigma` on the first hyperplanes, or
/// `None` if the program margin stays below the precision cap.
fn realize(oracles: &[SignOracle], sigma: &[i32], rank: usize, cfg: &Config) -> Result<Option<Vec<i64>>> {
    let mut bits = 64;
    loop {
        let rows: Vec<Vec<Q>> = approx_rows(&oracles[..sigma.len()], bits)
            .into_iter()
            .zip(sigma)
            .map(|(r, &s)| r.into_iter().map(|x| x * q(s as i64)).collect())
            .collect();
        let (t, x) = max_margin(&rows, rank);
        let slack = pow2(-((bits / 2) as i64)) * q(rank as i64);
        if t > slack {
            let dir: Vec<f64> = x.iter().map(to_f64).collect();
            let b = round_to_lattice(&dir, cfg.witness_cap, |b| {
                sigma
                    .iter()
                    .enumerate()
                    .all(|(l, &s)| oracles[l].sign_i64(b, WITNESS_BITS) == Some(s))
            })?;
            return Ok(Some(b));
        }
        if bits >= LP_CAP_BITS {
            return Ok(None);
        }
        bits *= 2;
    }
}

fn lp_chambers(oracles: &[SignOracle], rank: usize, cfg: &Config) -> Result<Vec<(Vec<i64>, Vec<i32>)>> {
    let mut partial: Vec<(Vec<i64>, Vec<i32>)> = vec![(Vec::new(), Vec::new())];
    for (j, oracle) in oracles.iter().enumerate() {
        let mut next = Vec::new();
        for (w, sigma) in partial {
            let here = if w.is_empty() {
                None
            } else {
                oracle.sign_i64(&w, WITNESS_BITS).filter(|s| *s != 0)
            };
            for s in [1, -1] {
                let mut ext = sigma.clone();
                ext.push(s);
                if here == Some(s) {
                    next.push((w.clone(), ext));
                } else if let Some(b) = realize(oracles, &ext, rank, cfg)? {
                    next.push((b, ext));
                }
            }
        }
        partial = next;
        debug_assert!(partial.iter().all(|(_, s)| s.len() == j + 1));
    }
    Ok(partial)
}

/// Whether `∏ A_i^{b_i}` is hyperbolic for each chamber witness.
pub fn anosov_in_every_chamber(generators: &[IntMatrix], chambers: &[Chamber]) -> (bool, Vec<bool>) {
    let d = generators[0].nrows();
    let per: Vec<bool> = chambers
        .iter()
        .map(|c| {
            let m = generators
                .iter()
                .zip(&c.witness)
                .fold(IntMatrix::identity(d), |acc, (g, &e)| acc.mul(&g.pow_signed(e)));
            is_anosov_matrix(&m)
        })
        .collect();
    (per.iter().all(|&x| x), per)
}
