//! Real algebraic numbers as (square-free integer polynomial, isolating
//! rational interval), the constants beta_m, alpha_m and lambda*, numeric
//! complex roots, and conjugate-based classification.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::{rational_to_f64, resultant, sqrt_bracket, IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgError {
    #[error("polynomial {poly} has {count} roots in ({lo}, {hi}], expected exactly one")]
    NotIsolating {
        poly: String,
        lo: String,
        hi: String,
        count: usize,
    },
    #[error("interval endpoints out of order: {lo} > {hi}")]
    EmptyInterval { lo: String, hi: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("division by zero")]
    DivisionByZero,
    #[error("root finder did not converge for {poly}: residual {residual:e}")]
    NoConvergence { poly: String, residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// How much is known about irreducibility of a defining polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Minimality {
    /// Proven irreducible (degree one, or degree at most three without
    /// rational roots).
    Proven,
    /// An exact integer factor selected by a numeric search over root
    /// subsets; irreducible unless the root approximations were misleading.
    Numerical,
    /// Not established.
    Unknown,
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

fn lcm_denoms(v: &[&BigRational]) -> BigRational {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    BigRational::from_integer(l)
}

fn fmt_rat(r: &BigRational) -> String {
    r.to_string()
}

/// A real algebraic number: the unique root of `poly` in the open interval
/// `(lo, hi)`, or the rational `lo` when `lo == hi`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
    minimality: Minimality,
}

impl AlgebraicReal {
    pub fn from_rational(r: BigRational) -> Self {
        AlgebraicReal {
            poly: IntPoly::linear_for(&r),
            lo: r.clone(),
            hi: r,
            minimality: Minimality::Proven,
        }
    }

    pub fn from_integer(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    /// The root of `poly` in `(lo, hi]`, which must be unique.
    pub fn new(poly: &IntPoly, lo: BigRational, hi: BigRational) -> Result<Self, AlgError> {
        if poly.is_zero() {
            return Err(AlgError::ZeroPolynomial);
        }
        if lo > hi {
            return Err(AlgError::EmptyInterval {
                lo: fmt_rat(&lo),
                hi: fmt_rat(&hi),
            });
        }
        let p = poly.squarefree_part();
        if lo == hi {
            if p.sign_at(&lo) != 0 {
                return Err(AlgError::NotIsolating {
                    poly: p.to_string(),
                    lo: fmt_rat(&lo),
                    hi: fmt_rat(&hi),
                    count: 0,
                });
            }
            return Ok(Self::from_rational(lo));
        }
        let s = p.sturm();
        let count = s.count_between(&lo, &hi);
        if count != 1 {
            return Err(AlgError::NotIsolating {
                poly: p.to_string(),
                lo: fmt_rat(&lo),
                hi: fmt_rat(&hi),
                count,
            });
        }
        Ok(Self::normalized(p, lo, hi))
    }

    /// Normalises a root known to be unique in `(lo, hi]` of square-free `p`
    /// so that both endpoints are non-roots, or collapses it to a rational.
    fn normalized(p: IntPoly, mut lo: BigRational, mut hi: BigRational) -> Self {
        if p.sign_at(&hi) == 0 {
            return Self::from_rational(hi);
        }
        while p.sign_at(&lo) == 0 {
            let mid = (&lo + &hi) / two();
            match p.sign_at(&mid) {
                0 => return Self::from_rational(mid),
                s if s == p.sign_at(&hi) => hi = mid,
                _ => lo = mid,
            }
        }
        let minimality = if p.degree() == Some(1) {
            Minimality::Proven
        } else {
            Minimality::Unknown
        };
        AlgebraicReal {
            poly: p,
            lo,
            hi,
            minimality,
        }
    }

    /// Real roots of `p` in increasing order.
    pub fn real_roots(p: &IntPoly) -> Vec<AlgebraicReal> {
        let sq = p.squarefree_part();
        sq.isolate_real_roots()
            .into_iter()
            .map(|(lo, hi)| {
                if lo == hi {
                    Self::from_rational(lo)
                } else {
                    Self::normalized(sq.clone(), lo, hi)
                }
            })
            .collect()
    }

    pub fn largest_root(p: &IntPoly) -> Option<AlgebraicReal> {
        Self::real_roots(p).pop()
    }

    /// Square-free primitive polynomial with this number as a root.
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn minimality(&self) -> Minimality {
        self.minimality
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.lo)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = (&self.lo + &self.hi) / two();
        match self.poly.sign_at(&mid) {
            0 => *self = Self::from_rational(mid),
            s if s == self.poly.sign_at(&self.hi) => self.hi = mid,
            _ => self.lo = mid,
        }
    }

    pub fn refine_to(&mut self, width: &BigRational) {
        while !self.is_rational() && &self.width() > width {
            self.refine();
        }
    }

    /// Interval of width at most `2^-bits`.
    pub fn refined(&self, bits: u32) -> Self {
        let mut c = self.clone();
        c.refine_to(&BigRational::new(BigInt::one(), BigInt::one() << bits as usize));
        c
    }

    pub fn to_f64(&self) -> f64 {
        let mut c = self.clone();
        let scale = rational_to_f64(&c.hi).abs().max(rational_to_f64(&c.lo).abs()).max(1.0);
        let target = crate::poly::rational_from_f64(scale * 1e-17);
        c.refine_to(&target);
        rational_to_f64(&((&c.lo + &c.hi) / two()))
    }

    pub fn signum(&self) -> i32 {
        match self.cmp_rational(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if self.is_rational() {
            return self.lo.cmp(r);
        }
        if r <= &self.lo {
            return Ordering::Greater;
        }
        if r >= &self.hi {
            return Ordering::Less;
        }
        match self.poly.sign_at(r) {
            0 => Ordering::Equal,
            s if s == self.poly.sign_at(&self.lo) => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Exact comparison. Equality is detected through a common root of the
    /// two defining polynomials inside the overlap of the intervals.
    pub fn cmp_exact(&self, other: &AlgebraicReal) -> Ordering {
        if let Some(r) = other.as_rational() {
            return self.cmp_rational(r);
        }
        if let Some(r) = self.as_rational() {
            return other.cmp_rational(r).reverse();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let g = a.poly.gcd(&b.poly);
        let gs = (g.degree().unwrap_or(0) > 0).then(|| g.sturm());
        loop {
            if a.is_rational() || b.is_rational() {
                return a.cmp_exact(&b);
            }
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if a.lo >= b.hi {
                return Ordering::Greater;
            }
            if let Some(s) = &gs {
                let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
                let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
                if s.count_between(lo, hi) > 0 {
                    return Ordering::Equal;
                }
            }
            a.refine();
            b.refine();
        }
    }

    pub fn neg(&self) -> Self {
        AlgebraicReal {
            poly: self.poly.reflect().primitive_part(),
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            minimality: self.minimality,
        }
    }

    pub fn add(&self, other: &AlgebraicReal) -> Self {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Self::from_rational(a + b);
        }
        if let Some(r) = other.as_rational() {
            return self.add_rational(r);
        }
        if let Some(r) = self.as_rational() {
            return other.add_rational(r);
        }
        // res_x(p(x), q(y - x))
        let p = as_bivariate_const(&self.poly);
        let q = shifted_bivariate(&other.poly);
        let r = resultant(&p, &q);
        isolate_from_enclosure(r, self, other, |a, b| (&a.lo + &b.lo, &a.hi + &b.hi))
    }

    pub fn sub(&self, other: &AlgebraicReal) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AlgebraicReal) -> Self {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Self::from_rational(a * b);
        }
        if self.signum() == 0 || other.signum() == 0 {
            return Self::from_integer(0);
        }
        if let Some(r) = other.as_rational() {
            return self.mul_rational(r);
        }
        if let Some(r) = self.as_rational() {
            return other.mul_rational(r);
        }
        // res_x(p(x), x^deg q * q(y / x))
        let p = as_bivariate_const(&self.poly);
        let dq = other.poly.degree().expect("nonzero");
        let q: Vec<IntPoly> = (0..=dq)
            .map(|i| IntPoly::monomial(other.poly.coeff(dq - i), dq - i))
            .collect();
        let r = resultant(&p, &q);
        isolate_from_enclosure(r, self, other, |a, b| {
            let c = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
            let lo = c.iter().min().expect("four products").clone();
            let hi = c.iter().max().expect("four products").clone();
            (lo, hi)
        })
    }

    pub fn inv(&self) -> Result<Self, AlgError> {
        if self.signum() == 0 {
            return Err(AlgError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(BigRational::one() / r));
        }
        let mut c = self.clone();
        while !c.is_rational() && c.lo.is_negative() != c.hi.is_negative() || c.lo.is_zero() || c.hi.is_zero() {
            c.refine();
            if c.is_rational() {
                return Ok(Self::from_rational(BigRational::one() / &c.lo));
            }
        }
        let poly = c.poly.reverse().primitive_part();
        let (lo, hi) = (BigRational::one() / &c.hi, BigRational::one() / &c.lo);
        let mut out = Self::new(&poly, lo, hi).expect("reciprocal interval isolates");
        out.minimality = self.minimality;
        Ok(out)
    }

    pub fn div(&self, other: &AlgebraicReal) -> Result<Self, AlgError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn sqrt(&self) -> Result<Self, AlgError> {
        match self.signum() {
            -1 => return Err(AlgError::NegativeSqrt),
            0 => return Ok(Self::from_integer(0)),
            _ => {}
        }
        if let Some(r) = self.as_rational() {
            use crate::scalar::Scalar;
            if let Some(s) = r.sqrt_opt() {
                return Ok(Self::from_rational(s));
            }
        }
        let poly = self.poly.compose_square();
        let mut c = self.clone();
        while !c.is_rational() && !c.lo.is_positive() {
            c.refine();
        }
        let mut bits = 8u32;
        loop {
            let (lo, _) = sqrt_bracket(&c.lo, bits);
            let (_, hi) = sqrt_bracket(&c.hi, bits);
            if let Some(r) = try_isolate(&poly, &lo, &hi) {
                return Ok(r);
            }
            c.refine();
            bits += 4;
        }
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: u32) -> Self {
        match k {
            0 => Self::from_integer(1),
            1 => self.clone(),
            _ if k % 2 == 0 => self.powi(k / 2).square(),
            _ => self.powi(k - 1).mul(self),
        }
    }

    /// `self + r`: the root of `b^d p(y - a/b)` for `r = a/b`.
    pub fn add_rational(&self, r: &BigRational) -> Self {
        if let Some(a) = self.as_rational() {
            return Self::from_rational(a + r);
        }
        let (a, b) = (r.numer(), r.denom());
        let d = self.poly.degree().expect("nonzero");
        // sum c_i (y - a)^i b^(d - i), then y -> b y
        let lin = IntPoly::new(vec![-a.clone(), BigInt::one()]);
        let mut acc = IntPoly::zero();
        for (i, c) in self.poly.coeffs().iter().enumerate().rev() {
            acc = &(&acc * &lin) + &IntPoly::constant(c * b.pow((d - i) as u32));
        }
        let q = acc.compose(&IntPoly::monomial(b.clone(), 1)).primitive_part();
        let mut out = Self::normalized(q, &self.lo + r, &self.hi + r);
        out.minimality = self.minimality;
        out
    }

    /// `self * r`: the root of `sum c_i b^i a^(d-i) y^i` for `r = a/b`.
    pub fn mul_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::from_integer(0);
        }
        if let Some(a) = self.as_rational() {
            return Self::from_rational(a * r);
        }
        let (a, b) = (r.numer(), r.denom());
        let d = self.poly.degree().expect("nonzero");
        let coeffs = self
            .poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * b.pow(i as u32) * a.pow((d - i) as u32))
            .collect();
        let q = IntPoly::new(coeffs).primitive_part();
        let (x, y) = (&self.lo * r, &self.hi * r);
        let (lo, hi) = if r.is_negative() { (y, x) } else { (x, y) };
        let mut out = Self::normalized(q, lo, hi);
        out.minimality = self.minimality;
        out
    }

    /// `(a x + b) / (c x + d)` at `x = self`, through
    /// `sum p_i (d y - b)^i (a - c y)^(deg - i)`, which keeps the degree.
    pub fn mobius(&self, a: &BigRational, b: &BigRational, c: &BigRational, d: &BigRational) -> Result<Self, AlgError> {
        if (a * d - b * c).is_zero() {
            return Err(AlgError::InvalidParameter("degenerate Mobius map".into()));
        }
        if let Some(x) = self.as_rational() {
            let den = c * x + d;
            if den.is_zero() {
                return Err(AlgError::DivisionByZero);
            }
            return Ok(Self::from_rational((a * x + b) / den));
        }
        let l = lcm_denoms(&[a, b, c, d]);
        let [a, b, c, d] = [a, b, c, d].map(|v| (v * &l).to_integer());
        let deg = self.poly.degree().expect("nonzero");
        let num = IntPoly::new(vec![-b.clone(), d.clone()]);
        let den = IntPoly::new(vec![a.clone(), -c.clone()]);
        let mut q = IntPoly::zero();
        for (i, p) in self.poly.coeffs().iter().enumerate() {
            let term = &num.pow(i as u32) * &den.pow((deg - i) as u32);
            q = &q + &term.scale(p);
        }
        let mut x = self.clone();
        let f = |t: &BigRational| {
            let to = |v: &BigInt| BigRational::from_integer(v.clone());
            (to(&a) * t + to(&b)) / (to(&c) * t + to(&d))
        };
        if !c.is_zero() {
            let pole = BigRational::new(-d.clone(), c.clone());
            while x.lo <= pole && pole <= x.hi {
                x.refine();
                if x.is_rational() {
                    return x.mobius(&BigRational::from_integer(a), &BigRational::from_integer(b), &BigRational::from_integer(c), &BigRational::from_integer(d));
                }
            }
        }
        let (u, v) = (f(&x.lo), f(&x.hi));
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        let mut out = Self::normalized(q.primitive_part(), lo, hi);
        out.minimality = self.minimality;
        Ok(out)
    }

    /// `self^2` through `p(x) p(-x) = E(x^2)^2 - x^2 O(x^2)^2`, which keeps
    /// the degree of the defining polynomial.
    pub fn square(&self) -> Self {
        if let Some(a) = self.as_rational() {
            return Self::from_rational(a * a);
        }
        let c = self.poly.coeffs();
        let even = IntPoly::new(c.iter().step_by(2).cloned().collect());
        let odd = IntPoly::new(c.iter().skip(1).step_by(2).cloned().collect());
        let q = &(&even * &even) - &(&IntPoly::x() * &(&odd * &odd));
        isolate_from_enclosure(q, self, self, |a, _| {
            let (l2, h2) = (&a.lo * &a.lo, &a.hi * &a.hi);
            if !a.lo.is_positive() && !a.hi.is_negative() {
                (BigRational::zero(), l2.max(h2))
            } else {
                (l2.clone().min(h2.clone()), l2.max(h2))
            }
        })
    }

    /// Defining data in the `poly@[lo,hi]` notation.
    pub fn notation(&self) -> String {
        format!("{}@[{},{}]", self.poly, self.lo, self.hi)
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            write!(f, "{r}")
        } else {
            write!(f, "{:.12} (root of {} in [{}, {}])", self.to_f64(), self.poly, self.lo, self.hi)
        }
    }
}

fn as_bivariate_const(p: &IntPoly) -> Vec<IntPoly> {
    p.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect()
}

/// `q(y - x)` as a polynomial in `x` with coefficients in `Z[y]`.
fn shifted_bivariate(q: &IntPoly) -> Vec<IntPoly> {
    let d = q.degree().expect("nonzero");
    let mut out = vec![IntPoly::zero(); d + 1];
    for (k, c) in q.coeffs().iter().enumerate() {
        let mut binom = BigInt::one();
        for j in 0..=k {
            // c * C(k, j) * (-1)^j * y^(k-j) * x^j
            let mut t = c * &binom;
            if j % 2 == 1 {
                t = -t;
            }
            out[j] = &out[j] + &IntPoly::monomial(t, k - j);
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    out
}

/// The unique root of `p` in `(lo, hi)`, if it is unique there and neither
/// endpoint is a root.
fn try_isolate(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Option<AlgebraicReal> {
    let sq = p.squarefree_part();
    if lo >= hi || sq.sign_at(lo) == 0 || sq.sign_at(hi) == 0 {
        return None;
    }
    (sq.sturm().count_between(lo, hi) == 1).then(|| AlgebraicReal::normalized(sq, lo.clone(), hi.clone()))
}

fn isolate_from_enclosure(
    r: IntPoly,
    a: &AlgebraicReal,
    b: &AlgebraicReal,
    enclose: impl Fn(&AlgebraicReal, &AlgebraicReal) -> (BigRational, BigRational),
) -> AlgebraicReal {
    let r = r.squarefree_part();
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        let (lo, hi) = enclose(&a, &b);
        if lo == hi {
            return AlgebraicReal::from_rational(lo);
        }
        if let Some(x) = try_isolate(&r, &lo, &hi) {
            return x;
        }
        a.refine();
        b.refine();
    }
}

/// Rational roots of `p`, found exactly: a rational root `u/v` in lowest
/// terms has `v` dividing the leading coefficient `c`, so `c` times the root
/// is an integer.
pub fn rational_roots(p: &IntPoly) -> Vec<BigRational> {
    let sq = p.squarefree_part();
    let Some(c) = sq.leading().map(|c| c.abs()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (lo, hi) in sq.isolate_real_roots() {
        if lo == hi {
            out.push(lo);
            continue;
        }
        let mut x = AlgebraicReal::normalized(sq.clone(), lo, hi);
        let target = BigRational::new(BigInt::one(), &c * 4);
        x.refine_to(&target);
        if let Some(r) = x.as_rational() {
            out.push(r.clone());
            continue;
        }
        let cr = BigRational::from_integer(c.clone());
        let (a, b) = ((&x.lo * &cr).ceil(), (&x.hi * &cr).floor());
        let mut k = a.to_integer();
        while BigRational::from_integer(k.clone()) <= b {
            let cand = BigRational::new(k.clone(), c.clone());
            if sq.sign_at(&cand) == 0 {
                out.push(cand);
            }
            k += 1;
        }
    }
    out
}

/// Numeric complex roots with multiplicities.
#[derive(Debug, Clone)]
pub struct ConjugateSet {
    /// Roots listed with multiplicity.
    pub roots: Vec<Complex64>,
    pub source_poly: IntPoly,
    /// Largest scaled residual `|p(r)| / sum |c_i| |r|^i` over the roots of
    /// the square-free factors.
    pub max_residual: f64,
    /// Relative discrepancy of the root sum and product against Vieta.
    pub vieta_error: f64,
}

impl ConjugateSet {
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        self.roots.iter().filter(|z| z.im.abs() <= tol).map(|z| z.re).collect()
    }

    pub fn non_real_count(&self, tol: f64) -> usize {
        self.roots.iter().filter(|z| z.im.abs() > tol).count()
    }
}

/// Square-free decomposition `p = c * prod f_i^i`.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, usize)> {
    let mut out = Vec::new();
    let mut r = p.primitive_part();
    let mut level = 1;
    while r.degree().unwrap_or(0) > 0 {
        let f = r.squarefree_part();
        let next = r.div_exact(&f).expect("square-free part divides");
        let g = next.gcd(&f);
        let once = f.div_exact(&g).expect("gcd divides");
        if once.degree().unwrap_or(0) > 0 {
            out.push((once, level));
        }
        r = next;
        level += 1;
    }
    out
}

/// Aberth iteration on a square-free polynomial followed by Newton polishing.
fn aberth(p: &IntPoly) -> Result<(Vec<Complex64>, f64), AlgError> {
    let d = p.degree().expect("nonzero");
    if d == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let c = p.to_f64_coeffs();
    let lead = c[d];
    let dp: Vec<f64> = (1..=d).map(|i| c[i] * i as f64).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let eval_d = |z: Complex64| dp.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    if d == 1 {
        return Ok((vec![Complex64::new(-c[0] / c[1], 0.0)], 0.0));
    }
    let radius = c[..d].iter().map(|a| (a / lead).abs()).fold(0.0f64, |m, a| m.max(a)).powf(1.0 / d as f64).max(0.5);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let pz = eval(z[i]);
            let dz = eval_d(z[i]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / dz;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dz = eval_d(*zi);
            if dz.norm() == 0.0 {
                break;
            }
            let step = eval(*zi) / dz;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    let mut worst = 0.0f64;
    for &zi in &z {
        let scale: f64 = c.iter().enumerate().map(|(i, a)| a.abs() * zi.norm().powi(i as i32)).sum();
        let res = eval(zi).norm() / scale.max(f64::MIN_POSITIVE);
        worst = worst.max(res);
    }
    if worst > 1e-8 || z.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(AlgError::NoConvergence {
            poly: p.to_string(),
            residual: worst,
        });
    }
    Ok((z, worst))
}

/// All complex roots of `p` with multiplicity.
pub fn complex_roots(p: &IntPoly) -> Result<ConjugateSet, AlgError> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(AlgError::InvalidParameter("polynomial of degree zero".into()));
    }
    let mut roots = Vec::new();
    let mut worst = 0.0f64;
    for (f, k) in squarefree_decomposition(p) {
        let (r, res) = aberth(&f)?;
        worst = worst.max(res);
        for z in r {
            for _ in 0..k {
                roots.push(z);
            }
        }
    }
    roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal).then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)));
    let c = p.to_f64_coeffs();
    let d = c.len() - 1;
    let sum: Complex64 = roots.iter().sum();
    let prod: Complex64 = roots.iter().product();
    let want_sum = -c[d - 1] / c[d];
    let want_prod = if d % 2 == 0 { c[0] / c[d] } else { -c[0] / c[d] };
    let vieta_error = ((sum - want_sum).norm() / want_sum.abs().max(1.0))
        .max((prod - want_prod).norm() / want_prod.abs().max(1.0));
    Ok(ConjugateSet {
        roots,
        source_poly: p.clone(),
        max_residual: worst,
        vieta_error,
    })
}

/// Smallest-degree integer factor of the defining polynomial that vanishes at
/// `lam`, with the strength of the irreducibility claim.
pub fn minimal_polynomial(lam: &AlgebraicReal) -> (IntPoly, Minimality) {
    let p = lam.poly().clone();
    let d = p.degree().expect("nonzero");
    if d == 1 {
        return (p, Minimality::Proven);
    }
    if let Some(r) = rational_roots(&p).into_iter().find(|r| lam.cmp_rational(r) == Ordering::Equal) {
        return (IntPoly::linear_for(&r), Minimality::Proven);
    }
    // remove rational roots, which are never conjugates of an irrational
    let mut q = p.clone();
    for r in rational_roots(&p) {
        q = q.div_exact(&IntPoly::linear_for(&r)).expect("rational root divides").primitive_part();
    }
    let dq = q.degree().expect("nonzero");
    if dq <= 3 {
        return (q, Minimality::Proven);
    }
    match subset_factor_search(&q, lam) {
        Some(f) => (f, Minimality::Numerical),
        None => (q, Minimality::Unknown),
    }
}

/// Searches unions of real roots and conjugate pairs containing `lam` for a
/// product with integer coefficients that divides `q` exactly, in increasing
/// degree.
fn subset_factor_search(q: &IntPoly, lam: &AlgebraicReal) -> Option<IntPoly> {
    let d = q.degree()?;
    let c = q.leading()?.clone();
    // monic q~(x) = c^(d-1) q(x / c) has roots c * r
    let cf = c.to_f64()?;
    let monic = if c.is_one() {
        q.clone()
    } else {
        // coefficient i of c^(d-1) q(x/c) is a_i c^(d-1-i)
        let mut v: Vec<BigInt> = (0..d).map(|i| q.coeff(i) * c.pow((d - 1 - i) as u32)).collect();
        v.push(BigInt::one());
        IntPoly::new(v)
    };
    let set = complex_roots(q).ok()?;
    let lam_f = lam.to_f64();
    let tol = 1e-7;
    let mut units: Vec<Vec<Complex64>> = Vec::new();
    let mut used = vec![false; set.roots.len()];
    for i in 0..set.roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = set.roots[i];
        if z.im.abs() <= tol {
            units.push(vec![Complex64::new(z.re * cf, 0.0)]);
        } else {
            let j = (0..set.roots.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| {
                    (set.roots[a] - z.conj()).norm().partial_cmp(&(set.roots[b] - z.conj()).norm()).unwrap_or(Ordering::Equal)
                })?;
            used[j] = true;
            units.push(vec![z * cf, z.conj() * cf]);
        }
    }
    let own = units
        .iter()
        .enumerate()
        .filter(|(_, u)| u.len() == 1)
        .min_by(|a, b| {
            ((a.1[0].re / cf) - lam_f).abs().partial_cmp(&((b.1[0].re / cf) - lam_f).abs()).unwrap_or(Ordering::Equal)
        })?
        .0;
    let others: Vec<usize> = (0..units.len()).filter(|&i| i != own).collect();
    if others.len() > 24 {
        return None;
    }
    let mut candidates: Vec<(usize, u32)> = (0u32..(1u32 << others.len()))
        .map(|mask| {
            let deg = 1 + others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &u)| units[u].len())
                .sum::<usize>();
            (deg, mask)
        })
        .collect();
    candidates.sort_unstable();
    for (deg, mask) in candidates {
        if deg == d {
            return Some(q.primitive_part());
        }
        let mut roots: Vec<Complex64> = units[own].clone();
        for (b, &u) in others.iter().enumerate() {
            if mask & (1 << b) != 0 {
                roots.extend(units[u].iter().copied());
            }
        }
        // quick trace filter
        let tr: f64 = roots.iter().map(|z| z.re).sum();
        if (tr - tr.round()).abs() > 1e-6 * tr.abs().max(1.0) {
            continue;
        }
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in &roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            coeffs = next;
        }
        if coeffs.iter().any(|z| z.re.abs() > 1e15) {
            return None;
        }
        if coeffs.iter().any(|z| (z.re - z.re.round()).abs() > 1e-6 * z.re.abs().max(1.0) || z.im.abs() > 1e-6 * z.re.abs().max(1.0)) {
            continue;
        }
        let g = IntPoly::new(coeffs.iter().map(|z| BigInt::from(z.re.round() as i64)).collect());
        if monic.div_exact(&g).is_some() {
            // undo the scaling: roots of g are c * r, so g(c x) vanishes at lam
            let back = IntPoly::new(
                g.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a * c.pow(i as u32))
                    .collect(),
            )
            .primitive_part();
            if lam.poly().div_exact(&back).is_some() || q.div_exact(&back).is_some() {
                return Some(back);
            }
        }
    }
    Some(q.primitive_part())
}

/// Conjugate-based classification of a positive algebraic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LambdaClass {
    NotTotallyReal,
    TotallyRealNotMax,
    TotallyRealMax,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub class: LambdaClass,
    pub minpoly: IntPoly,
    pub minimality: Minimality,
    /// Number of real roots of `minpoly` (exact Sturm count).
    pub real_conjugates: usize,
    /// Number of real roots of `minpoly` above the number (exact).
    pub larger_conjugates: usize,
}

pub fn classify_lambda(lam: &AlgebraicReal) -> Classification {
    let (minpoly, minimality) = minimal_polynomial(lam);
    let d = minpoly.degree().expect("nonzero");
    let s = minpoly.sturm();
    let real = s.variations_neg_inf() - s.variations_pos_inf();
    let larger = if lam.is_rational() {
        0
    } else {
        let hi = lam.interval().1;
        s.count_above(hi)
    };
    let class = if real < d {
        LambdaClass::NotTotallyReal
    } else if larger > 0 {
        LambdaClass::TotallyRealNotMax
    } else {
        LambdaClass::TotallyRealMax
    };
    Classification {
        class,
        minpoly,
        minimality,
        real_conjugates: real,
        larger_conjugates: larger,
    }
}

/// Whether every conjugate is real. Decided by an exact real-root count of
/// the minimal polynomial candidate.
pub fn is_totally_real(lam: &AlgebraicReal) -> bool {
    classify_lambda(lam).class != LambdaClass::NotTotallyReal
}

/// `x^(m+1) - (1 + x + ... + x^(m-1))`
pub fn beta_poly(m: usize) -> IntPoly {
    let mut c = vec![-1i64; m + 2];
    c[m] = 0;
    c[m + 1] = 1;
    IntPoly::from_i64(&c)
}

/// The unique positive root of `x^(m+1) = 1 + x + ... + x^(m-1)`.
pub fn beta(m: usize) -> Result<AlgebraicReal, AlgError> {
    if m == 0 {
        return Err(AlgError::InvalidParameter("beta needs m >= 1".into()));
    }
    if m == 1 {
        return Ok(AlgebraicReal::from_integer(1));
    }
    let mut b = AlgebraicReal::new(
        &beta_poly(m),
        BigRational::one(),
        BigRational::from_integer(BigInt::from(2)),
    )?;
    if let Minimality::Unknown = b.minimality {
        b.minimality = minimal_polynomial(&b).1;
    }
    Ok(b)
}

/// `y^2 x`-free annihilator of `gamma + 1/gamma` where `gamma^2` is a root of
/// `p`: with `P(x) = p(x^2) = a(y) x + b(y)` modulo `x^2 - y x + 1`, the
/// resultant is `a^2 + a b y + b^2`.
pub fn reciprocal_sum_annihilator(p: &IntPoly) -> IntPoly {
    let big = p.compose_square();
    let d = big.degree().expect("nonzero");
    let y = IntPoly::x();
    // x^k = u_k x + v_k
    let mut u = IntPoly::zero();
    let mut v = IntPoly::one();
    let mut a = IntPoly::zero();
    let mut b = IntPoly::zero();
    for k in 0..=d {
        let c = big.coeff(k);
        if !c.is_zero() {
            a = &a + &u.scale(&c);
            b = &b + &v.scale(&c);
        }
        let nu = &(&y * &u) + &v;
        let nv = -&u;
        u = nu;
        v = nv;
    }
    &(&(&a * &a) + &(&(&a * &b) * &y)) + &(&b * &b)
}

/// `alpha_m = beta_m^(1/2) + beta_m^(-1/2)`.
pub fn alpha(m: usize) -> Result<AlgebraicReal, AlgError> {
    if m == 0 {
        return Err(AlgError::InvalidParameter("alpha needs m >= 1".into()));
    }
    if m == 1 {
        return Ok(AlgebraicReal::from_integer(2));
    }
    let q = reciprocal_sum_annihilator(&beta_poly(m));
    let mut b = beta(m)?;
    let mut bits = 16u32;
    loop {
        let (blo, bhi) = b.interval();
        let (slo, _) = sqrt_bracket(blo, bits);
        let (_, shi) = sqrt_bracket(bhi, bits);
        let f = |s: &BigRational| s + BigRational::one() / s;
        if let Some(mut a) = try_isolate(&q, &f(&slo), &f(&shi)) {
            a.minimality = minimal_polynomial(&a).1;
            return Ok(a);
        }
        b.refine();
        bits += 4;
    }
}

/// `lambda* = sqrt(2 + sqrt 5)`, the positive root of `x^4 - 4x^2 - 1`.
pub fn lambda_star() -> AlgebraicReal {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let mut l = AlgebraicReal::new(&IntPoly::from_i64(&[-1, 0, -4, 0, 1]), r(2058, 1000), r(2059, 1000))
        .expect("x^4 - 4x^2 - 1 has one root in (2.058, 2.059]");
    l.minimality = minimal_polynomial(&l).1;
    l
}

/// One candidate `sign * (gamma + 1/gamma)` of the conjugate audit.
#[derive(Debug, Clone, Serialize)]
pub struct AuditCandidate {
    pub index: usize,
    pub sign: i8,
    pub beta_re: f64,
    pub beta_im: f64,
    pub re: f64,
    pub im: f64,
    pub real: bool,
    /// Real candidate equal to zero, which cannot be a conjugate of a
    /// nonzero number.
    pub excluded_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaAudit {
    pub m: usize,
    pub alpha: f64,
    pub candidates: Vec<AuditCandidate>,
    /// Real nonzero candidates that differ from `±alpha` by more than 1e-8.
    pub offending: Vec<f64>,
    /// Whether `+alpha` and `-alpha` both appear among the real candidates.
    pub found_pm_alpha: bool,
    /// Coefficients of prod (x - r(±gamma_i)), r(x) = x + 1/x, before rounding.
    pub transformed_coeffs: Vec<f64>,
    pub max_rounding_distance: f64,
    /// Whether the rounded product equals minus the exact annihilator.
    pub matches_exact: bool,
    pub passed: bool,
}

/// Numeric audit that the only real numbers of the form `±(gamma + 1/gamma)`,
/// with `gamma^2` a root of the beta polynomial, are `±alpha_m` (and zero
/// when `-1` is a root), plus a check that the transformed product
/// polynomial has integer coefficients.
pub fn alpha_conjugate_audit(m: usize) -> Result<AlphaAudit, AlgError> {
    if m < 2 {
        return Err(AlgError::InvalidParameter("audit needs m >= 2".into()));
    }
    let p = beta_poly(m);
    let set = complex_roots(&p)?;
    let a = alpha(m)?.to_f64();
    let tol = 1e-8;
    let mut candidates = Vec::new();
    let mut offending = Vec::new();
    let mut plus = false;
    let mut minus = false;
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for (i, &b) in set.roots.iter().enumerate() {
        let g = b.sqrt();
        for sign in [1i8, -1] {
            let gs = g * sign as f64;
            let v = gs + Complex64::new(1.0, 0.0) / gs;
            let real = v.im.abs() <= tol;
            let zero = real && v.re.abs() <= tol;
            if real && !zero {
                if (v.re - a).abs() <= tol {
                    plus = true;
                } else if (v.re + a).abs() <= tol {
                    minus = true;
                } else {
                    offending.push(v.re);
                }
            }
            candidates.push(AuditCandidate {
                index: i,
                sign,
                beta_re: b.re,
                beta_im: b.im,
                re: v.re,
                im: v.im,
                real,
                excluded_zero: zero,
            });
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * v;
            }
            coeffs = next;
        }
    }
    let max_rounding_distance = coeffs
        .iter()
        .map(|z| (z.re - z.re.round()).abs().max(z.im.abs()))
        .fold(0.0, f64::max);
    let rounded = IntPoly::new(coeffs.iter().map(|z| BigInt::from(z.re.round() as i64)).collect());
    let exact = reciprocal_sum_annihilator(&p);
    let matches_exact = rounded == -&exact;
    let passed = offending.is_empty() && plus && minus && max_rounding_distance < 1e-6 && matches_exact;
    Ok(AlphaAudit {
        m,
        alpha: a,
        candidates,
        offending,
        found_pm_alpha: plus && minus,
        transformed_coeffs: coeffs.iter().map(|z| z.re).collect(),
        max_rounding_distance,
        matches_exact,
        passed,
    })
}
