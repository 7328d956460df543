//! Spectral radius with certified brackets, exact characteristic
//! polynomials and comparisons, the named graph families, and limits of
//! spectral radii along pendant paths.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algnum::{lambda_star, AlgebraicReal};
use crate::graphkit::{ball_with_center, Bits, Graph, GraphError};
use crate::linalg::SymMatrix;
use crate::poly::{rational_from_f64, rational_to_f64, IntPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("bound violated: value {value} below {bound} ({which})")]
    BoundViolated {
        which: &'static str,
        value: f64,
        bound: f64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Certified enclosure `lo <= lambda1 <= hi` with a floating midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusBracket {
    pub value: f64,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RadiusBracket {
    fn exact(r: BigRational) -> Self {
        RadiusBracket {
            value: rational_to_f64(&r),
            lo: r.clone(),
            hi: r,
        }
    }

    /// Half-width of the bracket, rounded up to the next f64.
    pub fn error_bound(&self) -> f64 {
        let w = rational_to_f64(&((&self.hi - &self.lo) / BigRational::from_integer(2.into())));
        w + w.abs() * f64::EPSILON
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

fn component_graphs(g: &Graph) -> Vec<Graph> {
    g.components().into_iter().map(|m| g.induced(m)).collect()
}

/// Floating-point spectral radius (largest adjacency eigenvalue), uncertified.
pub fn lambda1(g: &Graph) -> f64 {
    if g.edge_count() == 0 {
        return 0.0;
    }
    let a: SymMatrix<f64> = SymMatrix::adjacency(g);
    a.eigenvalues().last().copied().unwrap_or(0.0)
}

/// Collatz-Wielandt bracket for a connected graph: for positive `x`,
/// `min (Ax)_i / x_i <= lambda1 <= max (Ax)_i / x_i`. The ratios are evaluated
/// exactly from the floating Perron vector.
fn collatz_wielandt(g: &Graph) -> (BigRational, BigRational) {
    let n = g.order();
    if g.edge_count() == 0 {
        return (BigRational::zero(), BigRational::zero());
    }
    let a: SymMatrix<f64> = SymMatrix::adjacency(g);
    let (vals, vecs) = a.eigen();
    let top = vals.len() - 1;
    let mut x: Vec<f64> = vecs[top].iter().map(|v| v.abs()).collect();
    if x.iter().any(|&v| !(v > 1e-200)) {
        // (A + I)^n x is positive on a connected graph
        x = vec![1.0; n];
        for _ in 0..n {
            let y: Vec<f64> = (0..n)
                .map(|i| x[i] + Bits(g.neighbors(i)).map(|j| x[j]).sum::<f64>())
                .collect();
            let s = y.iter().cloned().fold(0.0, f64::max);
            x = y.into_iter().map(|v| v / s).collect();
        }
    }
    let xr: Vec<BigRational> = x.iter().map(|&v| rational_from_f64(v)).collect();
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for i in 0..n {
        let s: BigRational = Bits(g.neighbors(i)).map(|j| xr[j].clone()).sum();
        let r = s / &xr[i];
        if lo.as_ref().map_or(true, |l| &r < l) {
            lo = Some(r.clone());
        }
        if hi.as_ref().map_or(true, |h| &r > h) {
            hi = Some(r);
        }
    }
    (lo.expect("nonempty"), hi.expect("nonempty"))
}

/// Certified bracket from Collatz-Wielandt ratios, taken over components.
pub fn radius_bracket(g: &Graph) -> Result<RadiusBracket, SpectraError> {
    if g.order() == 0 {
        return Err(SpectraError::EmptyGraph);
    }
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for c in component_graphs(g) {
        let (l, h) = collatz_wielandt(&c);
        if l > lo {
            lo = l;
        }
        if h > hi {
            hi = h;
        }
    }
    let value = rational_to_f64(&((&lo + &hi) / BigRational::from_integer(2.into())));
    Ok(RadiusBracket { value, lo, hi })
}

/// Spectral radius with a certified two-sided error at most `tol`. Uses the
/// Collatz-Wielandt bracket when it is tight enough and otherwise isolates
/// the largest root of the characteristic polynomial with Sturm sequences.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<RadiusBracket, SpectraError> {
    if !(tol > 0.0) {
        return Err(SpectraError::Hypothesis("tolerance must be positive".into()));
    }
    let b = radius_bracket(g)?;
    let width = rational_from_f64(2.0 * tol);
    if &b.hi - &b.lo <= width {
        return Ok(b);
    }
    let mut r = radius_algebraic(g)?;
    r.refine_to(&width);
    if let Some(q) = r.as_rational() {
        return Ok(RadiusBracket::exact(q.clone()));
    }
    let (lo, hi) = r.interval();
    Ok(RadiusBracket {
        value: rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into()))),
        lo: lo.clone(),
        hi: hi.clone(),
    })
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn det_integer(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    if sign {
        -d
    } else {
        d
    }
}

/// `det(xI - A)`: exact values at `x = 0..=n` interpolated in the falling
/// factorial basis, where the coefficients are integers.
pub fn char_poly(g: &Graph) -> IntPoly {
    let n = g.order();
    let values: Vec<BigInt> = (0..=n)
        .map(|x| {
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                BigInt::from(x)
                            } else if g.has_edge(i, j) {
                                -BigInt::one()
                            } else {
                                BigInt::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            det_integer(m)
        })
        .collect();
    // forward differences at 0 divided by k! give falling-factorial coefficients
    let mut diffs = values;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        coeffs.push(&diffs[0] / &fact);
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut p = IntPoly::zero();
    let mut falling = IntPoly::one();
    for (k, c) in coeffs.into_iter().enumerate() {
        p = &p + &falling.scale(&c);
        falling = &falling * &IntPoly::from_i64(&[-(k as i64), 1]);
    }
    p
}

/// `det(xI - A)` by fraction-free elimination over `Z[x]`; slower, kept as an
/// independent route.
pub fn char_poly_bareiss(g: &Graph) -> IntPoly {
    let n = g.order();
    let m: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        IntPoly::x()
                    } else if g.has_edge(i, j) {
                        IntPoly::from_i64(&[-1])
                    } else {
                        IntPoly::zero()
                    }
                })
                .collect()
        })
        .collect();
    crate::poly::det_poly_matrix(m)
}

/// The spectral radius as an exact algebraic number.
pub fn radius_algebraic(g: &Graph) -> Result<AlgebraicReal, SpectraError> {
    if g.order() == 0 {
        return Err(SpectraError::EmptyGraph);
    }
    if g.edge_count() == 0 {
        return Ok(AlgebraicReal::from_integer(0));
    }
    let mut best: Option<AlgebraicReal> = None;
    for c in component_graphs(g) {
        if c.edge_count() == 0 {
            continue;
        }
        let r = AlgebraicReal::largest_root(&char_poly(&c)).expect("real symmetric matrix has real roots");
        if best.as_ref().map_or(true, |b| r.cmp_exact(b) == Ordering::Greater) {
            best = Some(r);
        }
    }
    Ok(best.expect("some component has an edge"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RadiusComparison {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for RadiusComparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => RadiusComparison::Less,
            Ordering::Equal => RadiusComparison::Equal,
            Ordering::Greater => RadiusComparison::Greater,
        }
    }
}

impl fmt::Display for RadiusComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RadiusComparison::Less => "LESS",
            RadiusComparison::Equal => "EQUAL",
            RadiusComparison::Greater => "GREATER",
        })
    }
}

/// Exact comparison of `lambda1(g)` with `lam`. A certified floating bracket
/// settles separated cases; otherwise the largest root of the characteristic
/// polynomial is located relative to `lam` with Sturm sequences.
pub fn compare_radius(g: &Graph, lam: &AlgebraicReal) -> RadiusComparison {
    if g.order() == 0 {
        return lam.signum().cmp(&0).reverse().into();
    }
    let b = radius_bracket(g).expect("nonempty");
    let mut l = lam.clone();
    let w = (&b.hi - &b.lo).max(BigRational::new(BigInt::one(), BigInt::one() << 60usize));
    l.refine_to(&w);
    let (llo, lhi) = (l.interval().0.clone(), l.interval().1.clone());
    if l.is_rational() {
        if b.hi < llo {
            return RadiusComparison::Less;
        }
        if b.lo > lhi {
            return RadiusComparison::Greater;
        }
    } else {
        if b.hi <= llo {
            return RadiusComparison::Less;
        }
        if b.lo >= lhi {
            return RadiusComparison::Greater;
        }
    }
    compare_exact(&char_poly(g), &l)
}

/// Compares the largest real root of `p` (the spectral radius when `p` is a
/// characteristic polynomial) with `lam`.
pub fn compare_exact(p: &IntPoly, lam: &AlgebraicReal) -> RadiusComparison {
    let sq = p.squarefree_part();
    let s = sq.sturm();
    if let Some(r) = lam.as_rational() {
        let above = s.count_above(r);
        return if above > 0 {
            RadiusComparison::Greater
        } else if sq.sign_at(r) == 0 {
            RadiusComparison::Equal
        } else {
            RadiusComparison::Less
        };
    }
    let mut l = lam.clone();
    let g = sq.gcd(l.poly());
    let is_root = g.degree().unwrap_or(0) > 0 && {
        let (lo, hi) = l.interval();
        g.sturm().count_between(lo, hi) > 0
    };
    loop {
        if l.is_rational() {
            return compare_exact(p, &l);
        }
        let (lo, hi) = (l.interval().0.clone(), l.interval().1.clone());
        if is_root {
            if s.count_between(&lo, &hi) == 1 {
                return if s.count_above(&hi) == 0 {
                    RadiusComparison::Equal
                } else {
                    RadiusComparison::Greater
                };
            }
        } else {
            if s.count_above(&hi) > 0 {
                return RadiusComparison::Greater;
            }
            if s.count_above(&lo) == 0 {
                return RadiusComparison::Less;
            }
        }
        l.refine();
    }
}

/// Multiplicity of `lam` as an eigenvalue of `g`.
pub fn eigen_multiplicity(g: &Graph, lam: &AlgebraicReal) -> usize {
    let p = char_poly(g);
    let f = crate::algnum::minimal_polynomial(lam).0;
    let mut k = 0;
    let mut q = p;
    while let Some(next) = q.div_exact(&f) {
        q = next;
        k += 1;
    }
    k
}

/// Named families of graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilySpec {
    /// Star with three leaves and a path of `n` vertices at its centre.
    A(usize),
    /// Path through two branch vertices, each with a pendant, with `m1`
    /// vertices beyond the first, `n` between them and `m2` beyond the second.
    B(usize, usize, usize),
    /// Cycle on `n` vertices.
    C(usize),
    /// Cycle on `n + 1` vertices with a pendant.
    D(usize),
    /// Vertex with a pendant and two arms of `m` and `n` vertices.
    E(usize, usize),
    /// Vertex with two arms of two vertices and one arm of `n` vertices.
    F(usize),
    /// Path on `n` vertices.
    P(usize),
    /// Star with `n` leaves.
    S(usize),
}

impl FamilySpec {
    pub fn order(&self) -> usize {
        match *self {
            FamilySpec::A(n) => n + 4,
            FamilySpec::B(m1, n, m2) => m1 + n + m2 + 4,
            FamilySpec::C(n) => n,
            FamilySpec::D(n) => n + 2,
            FamilySpec::E(m, n) => m + n + 2,
            FamilySpec::F(n) => n + 5,
            FamilySpec::P(n) => n,
            FamilySpec::S(n) => n + 1,
        }
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        let ok = match *self {
            FamilySpec::A(n) => n >= 1,
            FamilySpec::B(m1, _, m2) => m1 >= 1 && m2 >= 1,
            FamilySpec::C(n) => n >= 3,
            FamilySpec::D(n) => n >= 2,
            FamilySpec::E(m, n) => m >= 1 && n >= 1,
            FamilySpec::F(n) => n >= 1,
            FamilySpec::P(n) => n >= 1,
            FamilySpec::S(_) => true,
        };
        if !ok {
            return Err(SpectraError::InvalidFamily(format!("{self} is outside the valid range")));
        }
        if self.order() > crate::graphkit::MAX_VERTICES {
            return Err(SpectraError::InvalidFamily(format!(
                "{self} has {} vertices, more than {}",
                self.order(),
                crate::graphkit::MAX_VERTICES
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::A(n) => write!(f, "A_{n}"),
            FamilySpec::B(a, n, b) => write!(f, "B_{{{a},{n},{b}}}"),
            FamilySpec::C(n) => write!(f, "C_{n}"),
            FamilySpec::D(n) => write!(f, "D_{n}"),
            FamilySpec::E(m, n) => write!(f, "E_{{{m},{n}}}"),
            FamilySpec::F(n) => write!(f, "F_{n}"),
            FamilySpec::P(n) => write!(f, "P_{n}"),
            FamilySpec::S(n) => write!(f, "S_{n}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = SpectraError;

    /// Accepts `B_{1,2,1}`, `B_1,2,1`, `B(1,2,1)` and `P5`-style forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpectraError::InvalidFamily(format!("cannot parse family {s:?}"));
        let s = s.trim();
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest: String = chars.filter(|c| !matches!(c, '_' | '{' | '}' | '(' | ')' | ' ')).collect();
        let nums: Vec<usize> = rest
            .split(',')
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let spec = match (kind.to_ascii_uppercase(), nums.as_slice()) {
            ('A', [n]) => FamilySpec::A(*n),
            ('B', [a, n, b]) => FamilySpec::B(*a, *n, *b),
            ('C', [n]) => FamilySpec::C(*n),
            ('D', [n]) => FamilySpec::D(*n),
            ('E', [m, n]) => FamilySpec::E(*m, *n),
            ('F', [n]) => FamilySpec::F(*n),
            ('P', [n]) => FamilySpec::P(*n),
            ('S', [n]) => FamilySpec::S(*n),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `(G, v, n)`: `g` with a path of `n` new vertices attached at `v`.
pub fn attach_path(g: &Graph, v: usize, n: usize) -> Result<Graph, SpectraError> {
    if v >= g.order() {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.order() }.into());
    }
    let mut h = g.clone();
    let mut last = v;
    for _ in 0..n {
        last = h.add_vertex(1 << last)?;
    }
    Ok(h)
}

/// Path `0 - 1 - ... - (len-1)` appended to `h` starting at `from` (or free).
fn extend_path(h: &mut Graph, from: Option<usize>, len: usize) -> Result<Option<usize>, GraphError> {
    let mut last = from;
    for _ in 0..len {
        let nb = last.map_or(0, |l| 1u64 << l);
        last = Some(h.add_vertex(nb)?);
    }
    Ok(last)
}

pub fn make_family(spec: FamilySpec) -> Result<Graph, SpectraError> {
    spec.validate()?;
    let g = match spec {
        FamilySpec::A(n) => attach_path(&Graph::star(3)?, 0, n)?,
        FamilySpec::B(m1, n, m2) => {
            let mut h = Graph::empty(0)?;
            let end1 = extend_path(&mut h, None, m1)?;
            let b1 = extend_path(&mut h, end1, 1)?.expect("one vertex");
            h.add_vertex(1 << b1)?;
            let mid = extend_path(&mut h, Some(b1), n)?;
            let b2 = extend_path(&mut h, mid, 1)?.expect("one vertex");
            h.add_vertex(1 << b2)?;
            extend_path(&mut h, Some(b2), m2)?;
            h
        }
        FamilySpec::C(n) => Graph::cycle(n)?,
        FamilySpec::D(n) => {
            let mut h = Graph::cycle(n + 1)?;
            h.add_vertex(1)?;
            h
        }
        FamilySpec::E(m, n) => attach_path(&Graph::path(m + 2)?, 1, n)?,
        FamilySpec::F(n) => attach_path(&Graph::path(5)?, 2, n)?,
        FamilySpec::P(n) => Graph::path(n)?,
        FamilySpec::S(n) => Graph::star(n)?,
    };
    debug_assert_eq!(g.order(), spec.order());
    Ok(g)
}

/// Closed-form spectral radii: `2cos(pi/(n+1))` for paths, `sqrt n` for stars,
/// `2` for cycles and for `B_{1,n,1}`.
#[derive(Debug, Clone)]
pub enum ClosedForm {
    Exact(AlgebraicReal),
    Cosine { value: f64, poly: AlgebraicReal },
}

impl ClosedForm {
    pub fn to_f64(&self) -> f64 {
        match self {
            ClosedForm::Exact(a) => a.to_f64(),
            ClosedForm::Cosine { value, .. } => *value,
        }
    }

    pub fn algebraic(&self) -> &AlgebraicReal {
        match self {
            ClosedForm::Exact(a) => a,
            ClosedForm::Cosine { poly, .. } => poly,
        }
    }
}

pub fn closed_form_radius(spec: FamilySpec) -> Option<ClosedForm> {
    match spec {
        FamilySpec::P(n) => {
            let value = 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
            let poly = AlgebraicReal::largest_root(&path_char_poly(n))?;
            Some(ClosedForm::Cosine { value, poly })
        }
        FamilySpec::S(n) => AlgebraicReal::from_integer(n as i64).sqrt().ok().map(ClosedForm::Exact),
        FamilySpec::C(_) | FamilySpec::B(1, _, 1) => Some(ClosedForm::Exact(AlgebraicReal::from_integer(2))),
        _ => None,
    }
}

/// `p_0 = 1`, `p_1 = x`, `p_n = x p_{n-1} - p_{n-2}`.
pub fn path_char_poly(n: usize) -> IntPoly {
    let mut a = IntPoly::one();
    let mut b = IntPoly::x();
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let c = &(&IntPoly::x() * &b) - &a;
        a = b;
        b = c;
    }
    b
}

/// `q_{n+1} = p_{n+1} - p_{n-1} - 2` for `n >= 2`.
pub fn cycle_char_poly(n: usize) -> Option<IntPoly> {
    (n >= 3).then(|| &(&path_char_poly(n) - &path_char_poly(n - 2)) - &IntPoly::from_i64(&[2]))
}

fn hoffman_parts(base: &Graph, v: usize) -> Result<(IntPoly, IntPoly), SpectraError> {
    if v >= base.order() {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: base.order() }.into());
    }
    if !base.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let probe = attach_path(base, v, 64usize.saturating_sub(base.order()).min(40))?;
    if lambda1(&probe) <= 2.0 + 1e-9 {
        return Err(SpectraError::Hypothesis(format!(
            "spectral radii of ({}, {v}, n) stay at most 2; use the closed forms instead",
            base
        )));
    }
    Ok((char_poly(base), char_poly(&base.delete_vertex(v))))
}

fn theta(x: f64) -> f64 {
    (x + (x * x - 4.0).max(0.0).sqrt()) / 2.0
}

/// Limit of `lambda1(G, v, n)` as `n` grows: the largest root above 2 of
/// `theta(x) p0(x) = p_{-1}(x)`, where `theta(x) = (x + sqrt(x^2 - 4)) / 2`,
/// `p0` is the characteristic polynomial of `G` and `p_{-1}` that of `G - v`.
/// Found by a downward scan and bisection.
pub fn hoffman_limit(base: &Graph, v: usize) -> Result<f64, SpectraError> {
    let (p0, pm) = hoffman_parts(base, v)?;
    let phi = |x: f64| theta(x) * p0.eval_f64(x) - pm.eval_f64(x);
    let upper = base.max_degree().max(base.degree(v) + 1) as f64 + 1.0;
    let lower = 2.0 + 1e-12;
    let steps = 200_000usize;
    let h = (upper - lower) / steps as f64;
    let mut hi = upper;
    let s_hi = phi(hi).signum();
    for k in 1..=steps {
        let x = upper - h * k as f64;
        let s = phi(x);
        if s == 0.0 {
            return Ok(x);
        }
        if s.signum() != s_hi {
            let mut lo = x;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if phi(mid).signum() == s_hi {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        hi = x;
    }
    Err(SpectraError::Hypothesis("no root above 2".into()))
}

/// Sign of `f` at the algebraic number `a`.
pub fn sign_at_algebraic(f: &IntPoly, a: &AlgebraicReal) -> i32 {
    if let Some(r) = a.as_rational() {
        return f.sign_at(r);
    }
    let g = f.gcd(a.poly());
    let (lo, hi) = a.interval();
    if g.degree().unwrap_or(0) > 0 && g.sturm().count_between(lo, hi) > 0 {
        return 0;
    }
    let fs = f.squarefree_part();
    let st = fs.sturm();
    let mut a = a.clone();
    loop {
        if a.is_rational() {
            return f.sign_at(a.as_rational().expect("rational"));
        }
        let (lo, hi) = a.interval();
        if fs.sign_at(lo) != 0 && st.count_between(lo, hi) == 0 {
            return f.sign_at(lo);
        }
        a.refine();
    }
}

/// Exact version of [`hoffman_limit`]: eliminating `theta` through
/// `theta^2 - x theta + 1 = 0` gives `H = p0^2 - x p0 p_{-1} + p_{-1}^2`; the
/// limit is the largest root of `H` above 2 on the branch where
/// `2 p_{-1} - x p0` has the sign of `p0`.
pub fn hoffman_limit_exact(base: &Graph, v: usize) -> Result<AlgebraicReal, SpectraError> {
    let (p0, pm) = hoffman_parts(base, v)?;
    let x = IntPoly::x();
    let h = &(&(&p0 * &p0) - &(&(&x * &p0) * &pm)) + &(&pm * &pm);
    let branch = &pm.scale(&BigInt::from(2)) - &(&x * &p0);
    let two = BigRational::from_integer(BigInt::from(2));
    for r in AlgebraicReal::real_roots(&h).into_iter().rev() {
        if r.cmp_rational(&two) != Ordering::Greater {
            break;
        }
        let s0 = sign_at_algebraic(&p0, &r);
        let sb = sign_at_algebraic(&branch, &r);
        if s0 != 0 && s0 == sb {
            return Ok(r);
        }
    }
    Err(SpectraError::Hypothesis("no admissible root above 2".into()))
}

/// `G+_e`: `e = (x, y)` replaced by a path `x - z - y` through a new vertex.
pub fn subdivide_edge(g: &Graph, e: (usize, usize)) -> Result<Graph, SpectraError> {
    let (x, y) = e;
    if x >= g.order() || y >= g.order() || !g.has_edge(x, y) {
        return Err(GraphError::NotAnEdge(x, y).into());
    }
    let mut h = g.clone();
    h.remove_edge(x, y)?;
    h.add_vertex((1 << x) | (1 << y))?;
    Ok(h)
}

/// Whether `e` lies on an end path: some path `x_1, ..., x_k` whose last two
/// vertices are the ends of `e` and whose first `k - 1` vertices have degrees
/// `1, 2, ..., 2`.
pub fn is_end_path_edge(g: &Graph, e: (usize, usize)) -> Result<bool, SpectraError> {
    let (x, y) = e;
    if x >= g.order() || y >= g.order() || !g.has_edge(x, y) {
        return Err(GraphError::NotAnEdge(x, y).into());
    }
    // x_{k-1} is one end of e; walk back through degree-2 vertices to a leaf
    let walks_to_leaf = |start: usize, other: usize| -> bool {
        let mut prev = other;
        let mut cur = start;
        for _ in 0..=g.order() {
            match g.degree(cur) {
                1 => return true,
                2 => {
                    let next = Bits(g.neighbors(cur) & !(1u64 << prev)).next();
                    match next {
                        Some(nx) if nx != start => {
                            prev = cur;
                            cur = nx;
                        }
                        _ => return false,
                    }
                }
                _ => return false,
            }
        }
        false
    };
    Ok(walks_to_leaf(x, y) || walks_to_leaf(y, x))
}

/// Result of the ball search.
#[derive(Debug, Clone, PartialEq)]
pub struct BallWitness {
    pub vertex: usize,
    pub value: f64,
    /// `2 cos(pi / (k + 2)) sqrt(d - 1)` with `d` the average degree.
    pub average_degree_bound: f64,
    /// `2k / (k + 1) sqrt(delta - 1)` when the minimum degree is at least 2.
    pub min_degree_bound: Option<f64>,
}

/// Vertex whose radius-`k` ball has the largest spectral radius, checked
/// against the ball lower bounds.
pub fn ball_radius_witness(g: &Graph, k: usize) -> Result<BallWitness, SpectraError> {
    if g.order() == 0 {
        return Err(SpectraError::EmptyGraph);
    }
    let d = g.average_degree();
    if d < 2.0 {
        return Err(SpectraError::Hypothesis(format!("average degree {d} is below 2")));
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for v in 0..g.order() {
        let (h, _) = ball_with_center(g, v, k)?;
        let r = lambda1(&h);
        if r > best.1 + 1e-12 {
            best = (v, r);
        }
    }
    let slack = 1e-9;
    let avg_bound = 2.0 * (std::f64::consts::PI / (k as f64 + 2.0)).cos() * (d - 1.0).sqrt();
    if best.1 < avg_bound - slack {
        return Err(SpectraError::BoundViolated {
            which: "average degree",
            value: best.1,
            bound: avg_bound,
        });
    }
    let delta = g.min_degree();
    let min_bound = (delta >= 2).then(|| 2.0 * k as f64 / (k as f64 + 1.0) * ((delta - 1) as f64).sqrt());
    if let Some(b) = min_bound {
        if best.1 < b - slack {
            return Err(SpectraError::BoundViolated {
                which: "minimum degree",
                value: best.1,
                bound: b,
            });
        }
    }
    Ok(BallWitness {
        vertex: best.0,
        value: best.1,
        average_degree_bound: avg_bound,
        min_degree_bound: min_bound,
    })
}

/// `lambda* = sqrt(2 + sqrt 5)` as the limit of `D_n` and `F_n`.
pub fn lambda_star_value() -> f64 {
    lambda_star().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn char_polys() {
        assert_eq!(char_poly(&Graph::path(3).unwrap()), IntPoly::from_i64(&[0, -2, 0, 1]));
        assert_eq!(char_poly(&Graph::cycle(3).unwrap()), IntPoly::from_i64(&[-2, -3, 0, 1]));
        assert_eq!(char_poly(&Graph::empty(1).unwrap()), IntPoly::x());
        let g = make_family(FamilySpec::D(4)).unwrap();
        assert_eq!(char_poly(&g), char_poly_bareiss(&g));
        let r = &(&IntPoly::x() * &cycle_char_poly(5).unwrap()) - &path_char_poly(4);
        assert_eq!(char_poly(&g), r);
    }

    #[test]
    fn radii() {
        let b = spectral_radius(&Graph::path(3).unwrap(), 1e-9).unwrap();
        assert!((b.value - 2f64.sqrt()).abs() <= 1e-9 && b.error_bound() <= 1e-9);
        assert_eq!(spectral_radius(&Graph::empty(1).unwrap(), 1e-9).unwrap().value, 0.0);
        let s4 = spectral_radius(&Graph::star(4).unwrap(), 1e-9).unwrap();
        assert!((s4.value - 2.0).abs() <= 1e-9);
        assert!(s4.contains(&q(2, 1)));
    }

    #[test]
    fn comparisons() {
        let sqrt2 = AlgebraicReal::new(&IntPoly::parse("x^2-2").unwrap(), q(14, 10), q(15, 10)).unwrap();
        assert_eq!(compare_radius(&Graph::path(3).unwrap(), &sqrt2), RadiusComparison::Equal);
        assert_eq!(compare_radius(&Graph::path(4).unwrap(), &sqrt2), RadiusComparison::Greater);
        assert_eq!(compare_radius(&Graph::complete(2).unwrap(), &AlgebraicReal::from_integer(2)), RadiusComparison::Less);
        assert_eq!(compare_radius(&Graph::cycle(7).unwrap(), &AlgebraicReal::from_integer(2)), RadiusComparison::Equal);
        let b = make_family(FamilySpec::B(1, 5, 1)).unwrap();
        assert_eq!(compare_radius(&b, &AlgebraicReal::from_integer(2)), RadiusComparison::Equal);
    }

    #[test]
    fn families() {
        assert_eq!(make_family(FamilySpec::A(1)).unwrap().degree_sequence(), vec![4, 1, 1, 1, 1]);
        assert!(lambda1(&make_family(FamilySpec::D(2)).unwrap()) > 2.0);
        assert!((lambda1(&make_family(FamilySpec::F(2)).unwrap()) - 2.0).abs() < 1e-9);
        assert!((lambda1(&make_family(FamilySpec::E(2, 5)).unwrap()) - 2.0).abs() < 1e-9);
        assert!(make_family(FamilySpec::C(2)).is_err());
        assert_eq!("B_{1,2,3}".parse::<FamilySpec>().unwrap(), FamilySpec::B(1, 2, 3));
        assert_eq!("E(2,3)".parse::<FamilySpec>().unwrap(), FamilySpec::E(2, 3));
    }

    #[test]
    fn limits() {
        let s3 = Graph::star(3).unwrap();
        let a = hoffman_limit(&s3, 0).unwrap();
        assert!((a - 3.0 / 2f64.sqrt()).abs() < 1e-9, "{a}");
        let ax = hoffman_limit_exact(&s3, 0).unwrap();
        assert!((ax.to_f64() - a).abs() < 1e-9);
        let f = hoffman_limit(&Graph::path(5).unwrap(), 2).unwrap();
        assert!((f - lambda_star_value()).abs() < 1e-9);
        assert!(hoffman_limit(&Graph::path(3).unwrap(), 1).is_err());
    }

    #[test]
    fn subdivision_and_end_paths() {
        let c4 = subdivide_edge(&Graph::cycle(3).unwrap(), (0, 1)).unwrap();
        assert_eq!(char_poly(&c4), char_poly(&Graph::cycle(4).unwrap()));
        assert!(is_end_path_edge(&make_family(FamilySpec::E(1, 1)).unwrap(), (1, 0)).unwrap());
        assert!(!is_end_path_edge(&Graph::cycle(5).unwrap(), (0, 1)).unwrap());
        assert!(is_end_path_edge(&Graph::path(5).unwrap(), (1, 2)).unwrap());
        assert!(subdivide_edge(&Graph::path(3).unwrap(), (0, 2)).is_err());
    }

    #[test]
    fn balls() {
        let w = ball_radius_witness(&Graph::cycle(6).unwrap(), 1).unwrap();
        assert!((w.value - 2f64.sqrt()).abs() < 1e-9);
        let w = ball_radius_witness(&Graph::complete(4).unwrap(), 1).unwrap();
        assert!((w.value - 3.0).abs() < 1e-9);
        assert!(ball_radius_witness(&Graph::path(4).unwrap(), 1).is_err());
    }

    #[test]
    fn multiplicities() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(eigen_multiplicity(&k3, &AlgebraicReal::from_integer(2)), 1);
        assert_eq!(eigen_multiplicity(&k3, &AlgebraicReal::from_integer(-1)), 2);
        assert_eq!(eigen_multiplicity(&Graph::path(3).unwrap(), &AlgebraicReal::from_integer(2)), 0);
    }
}
