//! Dense univariate polynomials over the integers, Sturm sequences and real
//! root isolation with rational endpoints.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Integer polynomial, coefficients stored from the constant term upward
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    /// The polynomial `den * x - num` vanishing at `r = num / den`.
    pub fn linear_for(r: &BigRational) -> Self {
        IntPoly::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and normalises the leading coefficient to be
    /// positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().expect("nonzero").is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^deg p(1/x)`
    pub fn reverse(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// `p(x^2)`
    pub fn compose_square(&self) -> Self {
        let mut v = vec![BigInt::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[2 * i] = c.clone();
        }
        IntPoly::new(v)
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &IntPoly) -> Self {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &IntPoly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = IntPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (num, den) = (x.numer(), x.denom());
        let d = self.coeffs.len().saturating_sub(1);
        let h = self.homogeneous(num, den);
        BigRational::new(h, den.pow(d as u32))
    }

    /// `sum c_i a^i b^(d-i)`, which has the sign of `p(a/b)` when `b > 0`.
    fn homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let h = self.homogeneous(x.numer(), x.denom());
        sign_of(&h)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading().expect("nonzero").clone();
        let mut r = self.clone();
        let mut steps = 0usize;
        let target = match self.degree() {
            Some(da) if da >= dd => da - dd + 1,
            _ => return r,
        };
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().expect("nonzero").clone();
            let t = d.scale(&lr).shift(dr - dd);
            r = &r.scale(&lc) - &t;
            steps += 1;
        }
        if steps < target {
            r = r.scale(&lc.pow((target - steps) as u32));
        }
        r
    }

    /// Quotient `self / d` when it exists in `Z[x]`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading().expect("nonzero");
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (qc, rem) = r.leading().expect("nonzero").div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &d.scale(&qc).shift(dr - dd);
            q[dr - dd] = qc;
        }
        Some(IntPoly::new(q))
    }

    /// Primitive greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// The primitive square-free part `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .map(|q| q.primitive_part())
            .expect("gcd divides its argument")
    }

    /// Largest `k` such that `d^k` divides `self`, for nonconstant `d`.
    pub fn multiplicity_of(&self, d: &IntPoly) -> usize {
        assert!(d.degree().unwrap_or(0) > 0, "divisor must be nonconstant");
        if self.is_zero() {
            return usize::MAX;
        }
        let d = d.primitive_part();
        let mut p = self.primitive_part();
        let mut k = 0;
        while let Some(q) = p.div_exact(&d) {
            p = q;
            k += 1;
        }
        k
    }

    /// Cauchy bound: every complex root has modulus below the returned
    /// integer.
    pub fn root_bound(&self) -> BigInt {
        let lc = self.leading().expect("nonzero polynomial").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigInt::one() + m.div_ceil(&lc)
    }

    pub fn sturm(&self) -> SturmSequence {
        SturmSequence::new(self)
    }

    /// Isolating intervals for the distinct real roots, in increasing order.
    /// Each interval is either a single rational root `(r, r)` or an open
    /// interval `(lo, hi)` at whose endpoints the square-free part has
    /// opposite nonzero signs.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sq = self.squarefree_part();
        let s = sq.sturm();
        let b = BigRational::from_integer(sq.root_bound());
        let lo = -b.clone();
        let total = s.count_between(&lo, &b);
        let mut out = Vec::new();
        isolate_rec(&sq, &s, lo, b, total, &mut out);
        out
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let s = self.squarefree_part().sturm();
        s.variations_neg_inf() - s.variations_pos_inf()
    }

    /// Parses expressions such as `x^4 - 4x^2 - 1` or `3*x - 2/3`. Rational
    /// coefficients are cleared to a primitive integer polynomial.
    pub fn parse(input: &str) -> Result<IntPoly, PolyError> {
        parse_poly(input)
    }
}

fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn isolate_rec(
    p: &IntPoly,
    s: &SturmSequence,
    lo: BigRational,
    hi: BigRational,
    count: usize,
    out: &mut Vec<(BigRational, BigRational)>,
) {
    // roots of p in (lo, hi] number `count`
    if count == 0 {
        return;
    }
    if count == 1 {
        if p.sign_at(&hi) == 0 {
            out.push((hi.clone(), hi));
            return;
        }
        if p.sign_at(&lo) != 0 {
            out.push((lo, hi));
            return;
        }
    }
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    let left = s.count_between(&lo, &mid);
    isolate_rec(p, s, lo, mid.clone(), left, out);
    isolate_rec(p, s, mid, hi, count - left, out);
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, false) => write!(f, "{a}")?,
                _ => {}
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Sturm sequence of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    seq: Vec<IntPoly>,
}

impl SturmSequence {
    /// Builds the sequence for the square-free part of `p`.
    pub fn new(p: &IntPoly) -> Self {
        let p0 = p.squarefree_part();
        let mut seq = vec![p0.clone()];
        let p1 = p0.derivative().primitive_part();
        if p1.is_zero() {
            return SturmSequence { seq };
        }
        seq.push(p1);
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree() == Some(0) {
                break;
            }
            let delta = a.degree().expect("nonzero") - b.degree().expect("nonzero");
            let lc_neg = b.leading().expect("nonzero").is_negative();
            let flip = lc_neg && (delta + 1) % 2 == 1;
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            let c = r.content();
            let r = IntPoly::new(r.coeffs.iter().map(|x| x / &c).collect());
            // next = -rem(a, b); prem = lc^(delta+1) * rem
            seq.push(if flip { r } else { -r });
        }
        SturmSequence { seq }
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.seq
    }

    fn count_changes(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut n = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::count_changes(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_pos_inf(&self) -> usize {
        Self::count_changes(self.seq.iter().map(|p| sign_of(p.leading().expect("nonzero"))))
    }

    pub fn variations_neg_inf(&self) -> usize {
        Self::count_changes(self.seq.iter().map(|p| {
            let s = sign_of(p.leading().expect("nonzero"));
            if p.degree().expect("nonzero") % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct roots in `(lo, hi]`.
    pub fn count_between(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations_at(lo) - self.variations_at(hi)
    }

    /// Number of distinct roots in `(lo, +inf)`.
    pub fn count_above(&self, lo: &BigRational) -> usize {
        self.variations_at(lo) - self.variations_pos_inf()
    }
}

/// Determinant of a square matrix over `Z[x]` by fraction-free elimination
/// with row pivoting.
pub fn det_poly_matrix(mut m: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Resultant with respect to `x` of two polynomials whose coefficients (in
/// increasing powers of `x`) are polynomials in a second variable.
pub fn resultant(p: &[IntPoly], q: &[IntPoly]) -> IntPoly {
    let trim = |v: &[IntPoly]| {
        let mut v = v.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let (p, q) = (trim(p), trim(q));
    if p.is_empty() || q.is_empty() {
        return IntPoly::zero();
    }
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let n = dp + dq;
    if n == 0 {
        return IntPoly::one();
    }
    let mut s = vec![vec![IntPoly::zero(); n]; n];
    for r in 0..dq {
        for (i, c) in p.iter().rev().enumerate() {
            s[r][r + i] = c.clone();
        }
    }
    for r in 0..dp {
        for (i, c) in q.iter().rev().enumerate() {
            s[dq + r][r + i] = c.clone();
        }
    }
    det_poly_matrix(s)
}

fn parse_poly(input: &str) -> Result<IntPoly, PolyError> {
    let fail = |reason: &str| PolyError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(fail("empty input"));
    }
    let mut terms: Vec<(usize, BigRational)> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(fail("expected '+' or '-' between terms"));
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            if bytes[i] == b'^' && i + 1 < bytes.len() && bytes[i + 1] == b'-' {
                return Err(fail("negative exponent"));
            }
            i += 1;
        }
        let term = &s[start..i];
        if term.is_empty() {
            return Err(fail("empty term"));
        }
        let (coef_str, power) = match term.find('x') {
            None => (term, 0usize),
            Some(pos) => {
                let rest = &term[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| fail("bad exponent"))?
                } else {
                    return Err(fail("unexpected text after x"));
                };
                (term[..pos].trim_end_matches('*'), power)
            }
        };
        let coef = if coef_str.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef_str).ok_or_else(|| fail("bad coefficient"))?
        };
        terms.push((power, coef * BigRational::from_integer(sign)));
    }
    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut rc = vec![BigRational::zero(); deg + 1];
    for (k, c) in terms {
        rc[k] += c;
    }
    let l = rc.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = rc
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let p = IntPoly::new(ints);
    if p.is_zero() {
        return Err(fail("zero polynomial"));
    }
    Ok(p)
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (parse_rational(a)?, parse_rational(b)?);
        if b.is_zero() {
            return None;
        }
        return Some(a / b);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

/// Rational bracket `(lo, hi)` with `lo <= sqrt(x) <= hi` and
/// `hi - lo <= 2^-bits` (relative to max(1, sqrt(x))).
pub fn sqrt_bracket(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let scale = BigInt::one() << (2 * bits as usize);
    // floor(sqrt(x * 4^bits)) / 2^bits
    let scaled = (x * BigRational::from_integer(scale)).floor().to_integer();
    let r = scaled.sqrt();
    let den = BigInt::one() << bits as usize;
    let lo = BigRational::new(r.clone(), den.clone());
    let hi = BigRational::new(r + 1, den);
    debug_assert!(&(&lo * &lo) <= x && &(&hi * &hi) >= x);
    (lo, hi)
}

/// Exact conversion of a finite `f64` to a rational.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerator/denominator: scale down
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let a = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let b = (x.denom() >> shift).to_f64().unwrap_or(1.0);
        a / b
    })
}
