//! Cyclic order of Lyapunov lines restricted to a lattice 2-plane.

use std::cmp::Ordering;
use std::f64::consts::PI;

use super::classes::{round_to_lattice, SignOracle, WITNESS_BITS};
use crate::error::{Error, Result};
use crate::exactnum::rational::{q, Interval, Q};

/// Lines in a plane spanned by integer vectors `p1`, `p2` of Z^k.
pub(crate) struct PlanarArrangement<'a> {
    pub oracles: &'a [SignOracle],
    pub basis: [Vec<i64>; 2],
    /// Cyclic order of rays: `(line, orientation)` meaning `±d_line`, with
    /// `d = (-g(p2), g(p1))` in plane coordinates.
    pub rays: Vec<(usize, i32)>,
    /// Position of `+d_line` in `rays`.
    pub positions: Vec<usize>,
}

fn restricted(o: &SignOracle, basis: &[Vec<i64>; 2], bits: u32) -> (Interval, Interval) {
    let f = o.functional();
    (f.evaluate_i64(&basis[0], bits), f.evaluate_i64(&basis[1], bits))
}

/// Certified sign of `det(g_a, g_b)`.
fn det_sign(a: &SignOracle, b: &SignOracle, basis: &[Vec<i64>; 2], cap_bits: u32) -> Option<i32> {
    let mut bits = 32;
    loop {
        let (a1, a2) = restricted(a, basis, bits);
        let (b1, b2) = restricted(b, basis, bits);
        let det = a1.mul(&b2).sub(&a2.mul(&b1));
        match det.sign() {
            Some(s) if s != 0 => return Some(s),
            Some(0) if det.is_point() => return Some(0),
            _ => {}
        }
        if bits >= cap_bits {
            return None;
        }
        bits = (bits * 2).min(cap_bits);
    }
}

fn restriction_nonzero(o: &SignOracle, basis: &[Vec<i64>; 2], cap_bits: u32) -> bool {
    let s1 = o.sign_i64(&basis[0], cap_bits);
    let s2 = o.sign_i64(&basis[1], cap_bits);
    matches!(s1, Some(s) if s != 0) || matches!(s2, Some(s) if s != 0)
}

impl<'a> PlanarArrangement<'a> {
    /// Order the lines; fails when two lines coincide on the plane or a
    /// functional vanishes on it, as far as `cap_bits` can tell.
    pub fn new(oracles: &'a [SignOracle], basis: [Vec<i64>; 2], cap_bits: u32) -> Result<Self> {
        let n = oracles.len();
        assert!(n >= 1);
        for o in oracles {
            if !restriction_nonzero(o, &basis, cap_bits) {
                return Err(Error::DegeneratePlane(1));
            }
        }
        let mut dets = vec![vec![0i32; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let s = det_sign(&oracles[i], &oracles[j], &basis, cap_bits).unwrap_or(0);
                if s == 0 {
                    return Err(Error::DegeneratePlane(1));
                }
                dets[i][j] = s;
                dets[j][i] = -s;
            }
        }
        // orientation making every other ray lie in (0, π) from d_0
        let orient: Vec<i32> = (0..n).map(|i| if i == 0 { 1 } else { dets[0][i] }).collect();
        let mut others: Vec<usize> = (1..n).collect();
        others.sort_by(|&a, &b| {
            if orient[a] * orient[b] * dets[a][b] > 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        let mut rays = vec![(0usize, 1i32)];
        rays.extend(others.iter().map(|&i| (i, orient[i])));
        let half = rays.clone();
        rays.extend(half.iter().map(|&(i, s)| (i, -s)));
        let mut positions = vec![0; n];
        for (p, &(i, s)) in rays.iter().enumerate() {
            if s == 1 {
                positions[i] = p;
            }
        }
        Ok(PlanarArrangement {
            oracles,
            basis,
            rays,
            positions,
        })
    }

    pub fn chamber_count(&self) -> usize {
        self.rays.len()
    }

    /// Sign of line `l` on the open sector between rays `m` and `m + 1`.
    pub fn expected_sign(&self, l: usize, m: usize) -> i32 {
        let n2 = self.rays.len();
        if (m + n2 - self.positions[l]) % n2 < n2 / 2 {
            -1
        } else {
            1
        }
    }

    fn ray_angle(&self, p: usize) -> f64 {
        let (l, s) = self.rays[p];
        let g = restricted(&self.oracles[l], &self.basis, 53);
        let (g1, g2) = (g.0.to_f64_mid(), g.1.to_f64_mid());
        let (x, y) = (-g2 * s as f64, g1 * s as f64);
        y.atan2(x)
    }

    /// Plane coordinates to Z^k.
    pub fn lift(&self, uv: &[i64]) -> Vec<i64> {
        self.basis[0]
            .iter()
            .zip(&self.basis[1])
            .map(|(a, b)| a * uv[0] + b * uv[1])
            .collect()
    }

    /// Lattice point of Z^k in the sector after ray `m`, certified against
    /// every line.
    pub fn sector_witness(&self, m: usize, witness_cap: u64) -> Result<Vec<i64>> {
        let n2 = self.rays.len();
        let a0 = self.ray_angle(m);
        let a1 = self.ray_angle((m + 1) % n2);
        let mut delta = (a1 - a0).rem_euclid(2.0 * PI);
        if n2 == 2 {
            delta = PI;
        }
        let mid = a0 + delta / 2.0;
        let dir = [mid.cos(), mid.sin()];
        let uv = round_to_lattice(&dir, witness_cap, |uv| {
            let b = self.lift(uv);
            let bq: Vec<Q> = b.iter().map(|&x| q(x)).collect();
            (0..self.oracles.len()).all(|l| self.oracles[l].sign(&bq, WITNESS_BITS) == Some(self.expected_sign(l, m)))
        })?;
        Ok(self.lift(&uv))
    }
}
