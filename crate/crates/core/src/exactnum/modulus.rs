//! Moduli of complex roots of integer polynomials.
//!
//! A root modulus `|λ|` is carried through its square `r = |λ|²`, a positive
//! real algebraic number isolated as the unique root of a squarefree backing
//! polynomial inside a rational interval. Strict inequalities are decided by
//! interval separation; equalities only through common roots of backing
//! polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{IntPolynomial, QPoly};
use super::rational::{ln_bounds, q, qr, to_f64, Interval, Q};
use super::sturm::{count_roots_in_disk, isolate_real_roots, root_bound, SturmChain};
use crate::config::DEFAULT_PRECISION_CAP_BITS;

/// Three-valued verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict3 {
    True,
    False,
    Undecided { precision_bits: u32 },
}

impl Verdict3 {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict3::True
        } else {
            Verdict3::False
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict3::True)
    }

    /// Conjunction: False dominates, then Undecided.
    pub fn and(self, other: Verdict3) -> Verdict3 {
        match (self, other) {
            (Verdict3::False, _) | (_, Verdict3::False) => Verdict3::False,
            (Verdict3::Undecided { precision_bits: a }, Verdict3::Undecided { precision_bits: b }) => {
                Verdict3::Undecided { precision_bits: a.max(b) }
            }
            (u @ Verdict3::Undecided { .. }, _) | (_, u @ Verdict3::Undecided { .. }) => u,
            _ => Verdict3::True,
        }
    }
}

/// Outcome of a modulus comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingVerdict {
    Less,
    Equal,
    Greater,
    Undecided { precision_bits: u32 },
}

impl OrderingVerdict {
    pub fn reverse(self) -> Self {
        match self {
            OrderingVerdict::Less => OrderingVerdict::Greater,
            OrderingVerdict::Greater => OrderingVerdict::Less,
            o => o,
        }
    }
}

/// A real algebraic number given as the unique root of a squarefree
/// polynomial inside an interval.
///
/// Either `iv` is a point (exact rational value) or `poly` has exactly one
/// root in the open interval and is nonzero at both endpoints.
#[derive(Clone, Debug)]
pub(crate) struct IsolatedRoot {
    pub(crate) poly: QPoly,
    pub(crate) iv: Interval,
}

fn sign(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl IsolatedRoot {
    pub(crate) fn is_exact(&self) -> bool {
        self.iv.is_point()
    }

    /// One bisection step.
    pub(crate) fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let m = self.iv.mid();
        let sm = sign(&self.poly.eval(&m));
        if sm == 0 {
            self.iv = Interval::point(m);
            return;
        }
        let slo = sign(&self.poly.eval(&self.iv.lo));
        if sm == slo {
            self.iv.lo = m;
        } else {
            self.iv.hi = m;
        }
    }

    /// Refine until `hi - lo <= |lo| 2^-bits` (positive roots) or exact.
    pub(crate) fn refine_relative(&mut self, bits: u32) {
        loop {
            if self.is_exact() {
                return;
            }
            let w = self.iv.width();
            let scale = self.iv.lo.abs().max(self.iv.hi.abs()) * super::rational::pow2(-(bits as i64));
            if w <= scale && !self.iv.contains_zero() {
                return;
            }
            self.bisect();
        }
    }

    /// Whether `x` equals the isolated root.
    pub(crate) fn equals_rational(&self, x: &Q) -> bool {
        if self.is_exact() {
            return &self.iv.lo == x;
        }
        self.iv.lo < *x && *x < self.iv.hi && self.poly.eval(x).is_zero()
    }

    /// Isolated root `r^e` for a positive root `r`.
    pub(crate) fn power(&mut self, e: u32) -> IsolatedRoot {
        if self.is_exact() {
            return IsolatedRoot {
                poly: QPoly::new(vec![-num_traits::pow(self.iv.lo.clone(), e as usize), Q::one()]),
                iv: Interval::point(num_traits::pow(self.iv.lo.clone(), e as usize)),
            };
        }
        let poly = self.poly.root_powers(e as usize).squarefree();
        let chain = SturmChain::new(&poly);
        loop {
            if self.is_exact() {
                return self.power(e);
            }
            let iv = self.iv.pow_nonneg(e);
            if !poly.eval(&iv.lo).is_zero()
                && !poly.eval(&iv.hi).is_zero()
                && chain.count_half_open(&iv.lo, &iv.hi) == 1
            {
                return IsolatedRoot { poly, iv };
            }
            self.bisect();
        }
    }

    /// Roots `1/r` for a positive root `r`.
    pub(crate) fn reciprocal(&self) -> IsolatedRoot {
        let mut c = self.poly.c.clone();
        c.reverse();
        let poly = QPoly::new(c).monic();
        let iv = Interval::new(Q::one() / &self.iv.hi, Q::one() / &self.iv.lo);
        IsolatedRoot { poly, iv }
    }
}

/// Exact equality test of two isolated roots; `None` if refinement hits the
/// bit cap.
pub(crate) fn isolated_equal(a: &mut IsolatedRoot, b: &mut IsolatedRoot, cap_bits: u32) -> Option<bool> {
    if a.is_exact() && b.is_exact() {
        return Some(a.iv.lo == b.iv.lo);
    }
    if a.is_exact() {
        return Some(b.equals_rational(&a.iv.lo));
    }
    if b.is_exact() {
        return Some(a.equals_rational(&b.iv.lo));
    }
    let g = a.poly.gcd(&b.poly);
    if g.degree() == 0 {
        return Some(false);
    }
    let gchain = SturmChain::new(&g);
    // endpoints of a (resp. b) are nonroots of a.poly (resp. b.poly), hence of g
    if gchain.count_half_open(&a.iv.lo, &a.iv.hi) == 0 || gchain.count_half_open(&b.iv.lo, &b.iv.hi) == 0 {
        return Some(false);
    }
    let mut bits = 8u32;
    loop {
        if a.iv.separation(&b.iv).is_some() {
            return Some(false);
        }
        if a.is_exact() || b.is_exact() {
            return isolated_equal(a, b, cap_bits);
        }
        let hull = a.iv.hull(&b.iv);
        if gchain.count_half_open(&hull.lo, &hull.hi) == 1 {
            return Some(true);
        }
        if bits > cap_bits {
            return None;
        }
        bits += 8;
        a.refine_relative(bits);
        b.refine_relative(bits);
    }
}

struct ClassInner {
    multiplicity: usize,
    unit: bool,
    root: Mutex<IsolatedRoot>,
}

/// The class of roots of a polynomial sharing one modulus.
///
/// Cloning shares the refinement state; narrowing is internally
/// synchronized.
#[derive(Clone)]
pub struct ModulusClass {
    inner: Arc<ClassInner>,
}

impl fmt::Debug for ModulusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.squared_enclosure();
        write!(
            f,
            "ModulusClass(|λ| ≈ {:.6}, mult {})",
            r.to_f64_mid().sqrt(),
            self.inner.multiplicity
        )
    }
}

impl ModulusClass {
    pub(crate) fn from_isolated(root: IsolatedRoot, multiplicity: usize) -> Self {
        let unit = root.equals_rational(&Q::one());
        let root = if unit {
            IsolatedRoot {
                poly: root.poly,
                iv: Interval::point(Q::one()),
            }
        } else {
            root
        };
        ModulusClass {
            inner: Arc::new(ClassInner {
                multiplicity,
                unit,
                root: Mutex::new(root),
            }),
        }
    }

    pub fn multiplicity(&self) -> usize {
        self.inner.multiplicity
    }

    /// Exactly modulus one.
    pub fn is_unit(&self) -> bool {
        self.inner.unit
    }

    /// Whether both handles share one refinement state.
    pub fn same_handle(&self, other: &ModulusClass) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Integer polynomial vanishing at `|λ|²`, squarefree.
    pub fn exact_backing(&self) -> IntPolynomial {
        self.lock().poly.to_primitive_int()
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, IsolatedRoot> {
        self.inner.root.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub(crate) fn snapshot(&self) -> IsolatedRoot {
        self.lock().clone()
    }

    /// Current enclosure of `|λ|²`.
    pub fn squared_enclosure(&self) -> Interval {
        self.lock().iv.clone()
    }

    /// Narrow the enclosure of `|λ|²` to relative width `2^-bits`.
    pub fn refine(&self, bits: u32) {
        self.lock().refine_relative(bits);
    }

    /// Enclosure of `log |λ|` with absolute width about `2^-bits`.
    pub fn log_enclosure(&self, bits: u32) -> Interval {
        if self.inner.unit {
            return Interval::zero();
        }
        let iv = {
            let mut g = self.lock();
            g.refine_relative(bits + 2);
            g.iv.clone()
        };
        let (llo, _) = ln_bounds(&iv.lo, bits + 2);
        let (_, lhi) = ln_bounds(&iv.hi, bits + 2);
        let half = qr(1, 2);
        Interval::new(llo * &half, lhi * half)
    }

    /// Certified sign of `log |λ|` (-1, 0, 1), or `None` at the cap.
    pub fn log_sign(&self, cap_bits: u32) -> Option<i32> {
        if self.inner.unit {
            return Some(0);
        }
        let mut bits = 16;
        loop {
            let iv = {
                let mut g = self.lock();
                g.refine_relative(bits);
                g.iv.clone()
            };
            if iv.lo > Q::one() {
                return Some(1);
            }
            if iv.hi < Q::one() {
                return Some(-1);
            }
            if bits >= cap_bits {
                return None;
            }
            bits = (bits * 2).min(cap_bits);
        }
    }

    /// Class of `1/λ` (log-modulus negated).
    pub fn inverse(&self) -> ModulusClass {
        let snap = self.snapshot();
        if self.inner.unit {
            return self.clone();
        }
        ModulusClass::from_isolated(snap.reciprocal(), self.inner.multiplicity)
    }

    /// Exact equality of the moduli.
    pub fn same_modulus(&self, other: &ModulusClass, cap_bits: u32) -> Option<bool> {
        if self.same_handle(other) {
            return Some(true);
        }
        if self.is_unit() || other.is_unit() {
            return Some(self.is_unit() == other.is_unit());
        }
        let mut a = self.snapshot();
        let mut b = other.snapshot();
        isolated_equal(&mut a, &mut b, cap_bits)
    }
}

/// Root moduli of `p` grouped into classes of equal modulus, sorted by
/// increasing modulus. Roots at zero are skipped (their log-modulus is
/// undefined); for the unimodular characteristic polynomials analysed here
/// they never occur.
pub fn root_modulus_classes(p: &IntPolynomial) -> Vec<ModulusClass> {
    assert!(!p.is_zero(), "root_modulus_classes of the zero polynomial");
    let p = p.strip_zero_roots();
    let n = p.degree();
    if n == 0 {
        return vec![];
    }
    let pq = p.to_q();
    let graeffe = pq.graeffe();
    let sym = pq.symmetric_square().squarefree();
    let bound = root_bound(&sym) + Q::one();
    let ivs = isolate_real_roots(&sym, &Q::zero(), &bound);
    let chain = SturmChain::new(&sym);
    let mut classes = Vec::new();
    let mut total = 0usize;
    for iv in ivs {
        if iv.hi <= Q::zero() {
            continue;
        }
        // open isolating interval around the candidate value
        let (a, b) = if iv.is_point() {
            let r = iv.lo.clone();
            let mut eps = r.clone() / q(4);
            loop {
                let l = &r - &eps;
                let h = &r + &eps;
                if !sym.eval(&l).is_zero() && !sym.eval(&h).is_zero() && chain.count_half_open(&l, &h) == 1 {
                    break (l, h);
                }
                eps /= q(2);
            }
        } else {
            (iv.lo.clone(), iv.hi.clone())
        };
        let cnt_hi = count_roots_in_disk(&graeffe, &b);
        let cnt_lo = if a.is_positive() {
            count_roots_in_disk(&graeffe, &a)
        } else {
            0
        };
        let cnt = cnt_hi - cnt_lo;
        if cnt > 0 {
            total += cnt;
            classes.push(ModulusClass::from_isolated(
                IsolatedRoot {
                    poly: sym.clone(),
                    iv,
                },
                cnt,
            ));
        }
    }
    assert_eq!(total, n, "modulus classes must account for every root");
    classes
}

/// Exact test for a root on the unit circle.
pub fn has_unit_modulus_root(p: &IntPolynomial) -> bool {
    assert!(!p.is_zero(), "has_unit_modulus_root of the zero polynomial");
    let p = p.strip_zero_roots();
    if p.degree() == 0 {
        return false;
    }
    let f = p.to_q();
    if f.eval(&Q::one()).is_zero() || f.eval(&-Q::one()).is_zero() {
        return true;
    }
    let g = f.gcd(&p.reciprocal().to_q());
    if g.degree() == 0 {
        return false;
    }
    // roots of g are closed under inversion and avoid ±1, so g is palindromic
    let h = g.palindromic_to_trace();
    if h.degree() == 0 {
        return false;
    }
    let chain = SturmChain::new(&h);
    chain.count_half_open(&q(-2), &q(2)) > 0
}

/// Compare two moduli within a precision budget.
pub fn compare_moduli(a: &ModulusClass, b: &ModulusClass, bit_budget: u32) -> OrderingVerdict {
    let budget = bit_budget.max(32);
    match a.same_modulus(b, budget) {
        Some(true) => return OrderingVerdict::Equal,
        None => return OrderingVerdict::Undecided { precision_bits: budget },
        Some(false) => {}
    }
    let mut bits = 16;
    loop {
        a.refine(bits);
        b.refine(bits);
        match a.squared_enclosure().separation(&b.squared_enclosure()) {
            Some(Ordering::Less) => return OrderingVerdict::Less,
            Some(Ordering::Greater) => return OrderingVerdict::Greater,
            _ => {}
        }
        if bits >= budget {
            return OrderingVerdict::Undecided { precision_bits: budget };
        }
        bits = (bits * 2).min(budget);
    }
}

/// Certify `|α|^q = |β|^p` with coprime `1 <= p, q <= max_den`, i.e.
/// `log|α| / log|β| = p / q`.
pub fn certify_multiplicative_relation(a: &ModulusClass, b: &ModulusClass, max_den: u64) -> Option<(u64, u64)> {
    certify_multiplicative_relation_with(a, b, max_den, DEFAULT_PRECISION_CAP_BITS)
}

pub fn certify_multiplicative_relation_with(
    a: &ModulusClass,
    b: &ModulusClass,
    max_den: u64,
    cap_bits: u32,
) -> Option<(u64, u64)> {
    let max_den = max_den.max(1);
    if a.is_unit() || b.is_unit() {
        return if a.is_unit() && b.is_unit() { Some((1, 1)) } else { None };
    }
    if a.same_handle(b) {
        return Some((1, 1));
    }
    let sa = a.log_sign(cap_bits)?;
    let sb = b.log_sign(cap_bits)?;
    if sa != sb {
        return None;
    }
    // ratio enclosure narrow enough to leave at most a couple of candidates
    let target = Q::new(1.into(), (2 * max_den * max_den).into());
    let mut bits = 32u32;
    let ratio = loop {
        let la = a.log_enclosure(bits);
        let lb = b.log_enclosure(bits);
        if let Some(r) = la.div(&lb) {
            if r.width() < target || bits >= cap_bits {
                break r;
            }
            let lo_bound = Q::new(1.into(), (max_den + 1).into());
            let hi_bound = Q::from_integer((max_den + 1).into());
            if r.hi < lo_bound || r.lo > hi_bound {
                return None;
            }
        }
        if bits >= cap_bits {
            return None;
        }
        bits = (bits * 2).min(cap_bits);
    };
    let mut candidates = Vec::new();
    for den in 1..=max_den {
        for num in 1..=max_den {
            if num.gcd(&den) != 1 {
                continue;
            }
            let v = Q::new(num.into(), den.into());
            if ratio.contains(&v) {
                candidates.push((num, den));
            }
        }
    }
    let mut ra = a.snapshot();
    let mut rb = b.snapshot();
    for (num, den) in candidates {
        // |α|^den = |β|^num  <=>  r_a^den = r_b^num
        let mut pa = ra.power(den as u32);
        let mut pb = rb.power(num as u32);
        if isolated_equal(&mut pa, &mut pb, cap_bits) == Some(true) {
            return Some((num, den));
        }
    }
    None
}

/// Exact test of `log|α| / log|β| = p / q` for positive `p, q`, i.e.
/// `(αᾱ)^q = (ββ̄)^p`.
pub fn certify_ratio(a: &ModulusClass, b: &ModulusClass, p: u64, q: u64, cap_bits: u32) -> Option<bool> {
    assert!(p > 0 && q > 0);
    if a.is_unit() || b.is_unit() {
        return Some(a.is_unit() && b.is_unit());
    }
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    if p == 1 && q == 1 {
        return a.same_modulus(b, cap_bits);
    }
    let mut pa = a.snapshot().power(q as u32);
    let mut pb = b.snapshot().power(p as u32);
    isolated_equal(&mut pa, &mut pb, cap_bits)
}

impl ModulusClass {
    /// The class itself if its log-modulus is positive, else its inverse.
    pub fn with_positive_log(&self, cap_bits: u32) -> Option<ModulusClass> {
        match self.log_sign(cap_bits)? {
            -1 => Some(self.inverse()),
            _ => Some(self.clone()),
        }
    }
}

/// Approximate modulus as f64, for diagnostics and plotting.
pub fn approx_modulus(c: &ModulusClass) -> f64 {
    to_f64(&c.squared_enclosure().mid()).sqrt()
}
