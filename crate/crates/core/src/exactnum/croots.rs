//! Certified inclusion disks for the complex roots of a squarefree
//! polynomial, and modulus enclosures of polynomial values on those disks.

use num_traits::Zero;

use super::poly::QPoly;
use super::rational::{ceil_dyadic, floor_dyadic, from_f64, q, sqrt_bounds, to_f64, Interval, Q};

/// Complex rational number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CQ {
    pub re: Q,
    pub im: Q,
}

impl CQ {
    pub fn new(re: Q, im: Q) -> Self {
        CQ { re, im }
    }

    pub fn real(re: Q) -> Self {
        CQ { re, im: Q::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Q::zero())
    }

    pub fn add(&self, o: &CQ) -> CQ {
        CQ::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CQ) -> CQ {
        CQ::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CQ) -> CQ {
        CQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, k: &Q) -> CQ {
        CQ::new(&self.re * k, &self.im * k)
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, o: &CQ) -> CQ {
        let n = o.norm_sq();
        CQ::new(
            (&self.re * &o.re + &self.im * &o.im) / &n,
            (&self.im * &o.re - &self.re * &o.im) / &n,
        )
    }

    pub fn round(&self, bits: u32) -> CQ {
        CQ::new(floor_dyadic(&self.re, bits), floor_dyadic(&self.im, bits))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

fn eval_c(p: &QPoly, z: &CQ) -> CQ {
    let mut acc = CQ::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CQ::real(c.clone()));
    }
    acc
}

/// Upper bound on `sqrt(x)`.
fn sqrt_up(x: &Q, bits: u32) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    sqrt_bounds(x, bits).1
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 {
            re: (self.re * o.re + self.im * o.im) / n,
            im: (self.im * o.re - self.re * o.im) / n,
        }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Floating-point Aberth iteration for starting values.
fn aberth_f64(p: &QPoly) -> Vec<C64> {
    let n = p.degree();
    let lc = to_f64(&p.lc());
    let c: Vec<f64> = p.coeffs().iter().map(|x| to_f64(x) / lc).collect();
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<C64> = (0..n)
        .map(|j| {
            let ang = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / n as f64 + 0.4;
            C64 {
                re: 0.5 * bound * ang.cos(),
                im: 0.5 * bound * ang.sin(),
            }
        })
        .collect();
    let eval = |x: C64| -> (C64, C64) {
        let mut v = C64 { re: 0.0, im: 0.0 };
        let mut d = C64 { re: 0.0, im: 0.0 };
        for a in c.iter().rev() {
            d = d.mul(x).add(v);
            v = v.mul(x).add(C64 { re: *a, im: 0.0 });
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for j in 0..n {
            let (v, d) = eval(z[j]);
            if v.abs() == 0.0 {
                continue;
            }
            let ratio = v.div(d);
            let mut s = C64 { re: 0.0, im: 0.0 };
            for k in 0..n {
                if k != j {
                    s = s.add(C64 { re: 1.0, im: 0.0 }.div(z[j].sub(z[k])));
                }
            }
            let denom = C64 { re: 1.0, im: 0.0 }.sub(ratio.mul(s));
            let w = ratio.div(denom);
            if w.re.is_finite() && w.im.is_finite() {
                z[j] = z[j].sub(w);
                moved = moved.max(w.abs() / (1.0 + z[j].abs()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Certified simple roots: centers `z_j` and radii `r_j` with pairwise
/// disjoint disks, each containing exactly one root.
#[derive(Clone, Debug)]
pub struct RootDisks {
    pub centers: Vec<CQ>,
    pub radii: Vec<Q>,
    pub bits: u32,
}

fn weierstrass(p: &QPoly, z: &[CQ]) -> Vec<CQ> {
    let lc = p.lc();
    (0..z.len())
        .map(|j| {
            let mut den = CQ::real(lc.clone());
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    den = den.mul(&z[j].sub(zk));
                }
            }
            if den.is_zero() {
                CQ::real(q(1_000_000))
            } else {
                eval_c(p, &z[j]).div(&den)
            }
        })
        .collect()
}

fn disks_disjoint(z: &[CQ], r: &[Q]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let s = &r[i] + &r[j];
            if z[i].sub(&z[j]).norm_sq() <= &s * &s {
                return false;
            }
        }
    }
    true
}

/// Isolate all complex roots of a squarefree `p` to radius about `2^-bits`.
pub fn certified_root_disks(p: &QPoly, bits: u32) -> RootDisks {
    let n = p.degree();
    assert!(n >= 1);
    if n == 1 {
        let root = -p.coeffs()[0].clone() / p.lc();
        return RootDisks {
            centers: vec![CQ::real(root)],
            radii: vec![Q::zero()],
            bits,
        };
    }
    let start = aberth_f64(p);
    let mut z: Vec<CQ> = start
        .iter()
        .map(|c| CQ::new(from_f64(c.re), from_f64(c.im)))
        .collect();
    let mut prec = 64u32;
    let nq = q(n as i64);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let w = weierstrass(p, &z);
        let radii: Vec<Q> = w
            .iter()
            .map(|wj| ceil_dyadic(&(sqrt_up(&wj.norm_sq(), prec + 8) * &nq), prec + 8))
            .collect();
        let small = radii.iter().all(|r| r <= &super::rational::pow2(-(bits as i64)));
        if small && disks_disjoint(&z, &radii) {
            return RootDisks {
                centers: z,
                radii,
                bits,
            };
        }
        // Weierstrass (Durand–Kerner) step at the working precision
        z = z.iter().zip(&w).map(|(zj, wj)| zj.sub(wj).round(prec)).collect();
        if radii.iter().all(|r| r < &super::rational::pow2(-((prec / 2) as i64))) {
            prec = (prec * 2).max(bits + 16);
        }
        if rounds > 400 {
            prec *= 2;
            rounds = 0;
        }
    }
}

/// Enclosure of `|f(θ)|²` over the disk `D(z, r)`.
pub fn value_modulus_sq(f: &QPoly, z: &CQ, r: &Q, bits: u32) -> Interval {
    // Taylor coefficients of f at z by repeated synthetic division
    let mut coeffs: Vec<CQ> = f.coeffs().iter().map(|c| CQ::real(c.clone())).collect();
    let mut taylor = Vec::new();
    while !coeffs.is_empty() {
        let mut acc = CQ::zero();
        let mut quot = vec![CQ::zero(); coeffs.len().saturating_sub(1)];
        for i in (0..coeffs.len()).rev() {
            acc = acc.mul(z).add(&coeffs[i]);
            if i > 0 {
                quot[i - 1] = acc.clone();
            }
        }
        taylor.push(acc);
        coeffs = quot;
    }
    if taylor.is_empty() {
        return Interval::zero();
    }
    let center_sq = taylor[0].norm_sq();
    let mut err = Q::zero();
    let mut rp = r.clone();
    for t in &taylor[1..] {
        err += sqrt_up(&t.norm_sq(), bits) * &rp;
        rp *= r;
    }
    if err.is_zero() {
        return Interval::point(center_sq);
    }
    let (mlo, mhi) = if center_sq.is_zero() {
        (Q::zero(), Q::zero())
    } else {
        sqrt_bounds(&center_sq, bits)
    };
    let lo = (&mlo - &err).max(Q::zero());
    let hi = &mhi + &err;
    Interval::new(&lo * &lo, &hi * &hi)
}
