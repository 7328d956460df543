//! Equiangular lines: the Kronecker lower-bound construction, the switching
//! and projection reduction to `L(alpha, t)`-codes, underlying graphs, and
//! the upper-bound calculators.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algnum::{classify_lambda, lambda_star, AlgError, AlgebraicReal, LambdaClass};
use crate::forbidden::{choose_m, lambda_json, SCHEMA_VERSION};
use crate::graphkit::{Graph, GraphError};
use crate::linalg::SymMatrix;
use crate::order::OrderValue;
use crate::scalar::{from_int, PsdCheck, Scalar};
use crate::spectra::{compare_radius, eigen_multiplicity, radius_bracket, RadiusComparison, SpectraError};

/// Tolerance for entry membership, PSD and rank tests on floating codes;
/// formats coarser than `f64` use a multiple of their unit roundoff.
pub const FLOAT_TOL: f64 = 1e-9;

/// Interval width, as a power of two, used when an irrational parameter is
/// converted to a floating scalar.
const CONVERSION_BITS: u32 = 200;

/// Node cap for the backtracking independent-set search.
const INDEPENDENT_SET_NODES: u64 = 1_000_000;

#[derive(Debug, Clone, Error)]
pub enum LinesError {
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("irrational parameter cannot be represented exactly")]
    NotRepresentable,
    #[error("spectral radius exceeds lambda, so I - A/lambda is not positive semidefinite")]
    RadiusTooLarge,
    #[error("dimension {n} is below k + 1 = {}", k + 1)]
    DimensionTooSmall { n: usize, k: usize },
    #[error("no independent set of size {t} found (best {found})")]
    NoIndependentSet { t: usize, found: usize },
    #[error("entry ({i}, {j}) = {value} is off the declared inner-product set")]
    OffL { i: usize, j: usize, value: f64 },
    #[error("{count} entries lie in the zero tolerance band (allowed {allowed})")]
    Ambiguous { count: usize, allowed: usize },
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn alg_rat(n: i64, d: i64) -> AlgebraicReal {
    AlgebraicReal::from_rational(rat(n, d))
}

/// `lambda = (1 - alpha) / (2 alpha)` for `alpha` in `(0, 1)`.
pub fn lam_of_alpha(alpha: &BigRational) -> Result<BigRational, LinesError> {
    if !alpha.is_positive() || alpha >= &BigRational::one() {
        return Err(LinesError::Domain(format!("alpha = {alpha} is not in (0, 1)")));
    }
    Ok((BigRational::one() - alpha) / (alpha * rat(2, 1)))
}

/// `alpha = 1 / (1 + 2 lambda)` for `lambda > 0`.
pub fn alpha_of_lam(lam: &BigRational) -> Result<BigRational, LinesError> {
    if !lam.is_positive() {
        return Err(LinesError::Domain(format!("lambda = {lam} is not positive")));
    }
    Ok(BigRational::one() / (BigRational::one() + lam * rat(2, 1)))
}

/// [`lam_of_alpha`] for algebraic `alpha`.
pub fn lam_of_alpha_algebraic(alpha: &AlgebraicReal) -> Result<AlgebraicReal, LinesError> {
    if let Some(a) = alpha.as_rational() {
        return Ok(AlgebraicReal::from_rational(lam_of_alpha(a)?));
    }
    if alpha.signum() <= 0 || alpha.cmp_rational(&BigRational::one()) != Ordering::Less {
        return Err(LinesError::Domain(format!("alpha = {} is not in (0, 1)", alpha.to_f64())));
    }
    Ok(alpha.inv()?.sub(&alg_rat(1, 1)).mul(&alg_rat(1, 2)))
}

/// [`alpha_of_lam`] for algebraic `lambda`.
pub fn alpha_of_lam_algebraic(lam: &AlgebraicReal) -> Result<AlgebraicReal, LinesError> {
    if let Some(l) = lam.as_rational() {
        return Ok(AlgebraicReal::from_rational(alpha_of_lam(l)?));
    }
    if lam.signum() <= 0 {
        return Err(LinesError::Domain(format!("lambda = {} is not positive", lam.to_f64())));
    }
    Ok(alg_rat(1, 1).add(&lam.mul(&alg_rat(2, 1))).inv()?)
}

/// An algebraic number as a scalar: exact when rational, otherwise the
/// midpoint of a narrow isolating interval. Exact scalars reject irrational
/// input.
pub fn scalar_of<T: Scalar>(a: &AlgebraicReal) -> Result<T, LinesError> {
    if let Some(r) = a.as_rational() {
        return Ok(T::from_rational(r));
    }
    if T::EXACT {
        return Err(LinesError::NotRepresentable);
    }
    let r = a.refined(CONVERSION_BITS);
    let (lo, hi) = r.interval();
    Ok(T::from_rational(&((lo + hi) / rat(2, 1))))
}

/// The two-element inner-product set `L(alpha, t)`.
#[derive(Debug, Clone)]
pub struct LSet {
    pub alpha: AlgebraicReal,
    pub t: usize,
}

impl LSet {
    pub fn new(alpha: &AlgebraicReal, t: usize) -> Result<Self, LinesError> {
        lam_of_alpha_algebraic(alpha)?;
        if t == 0 {
            return Err(LinesError::Domain("t must be positive".into()));
        }
        Ok(LSet { alpha: alpha.clone(), t })
    }

    /// `[-(1/lambda)(1 - q) + q, q]` with `q = 1 / (t + 1/alpha)`.
    pub fn values<T: Scalar>(&self) -> Result<[T; 2], LinesError> {
        let a: T = scalar_of(&self.alpha)?;
        let one = T::one();
        let lam = (one.clone() - a.clone()) / (from_int::<T>(2) * a.clone());
        let q = one.clone() / (from_int::<T>(self.t as i64) + one.clone() / a);
        let neg = -(one.clone() / lam) * (one - q.clone()) + q.clone();
        Ok([neg, q])
    }
}

/// A finite set of unit vectors given by its Gram matrix, with the declared
/// set of off-diagonal inner products and the claimed ambient dimension.
#[derive(Debug, Clone)]
pub struct SphericalCode<T> {
    pub gram: SymMatrix<T>,
    pub l: Vec<T>,
    pub dim: usize,
    pub alpha: Option<AlgebraicReal>,
    pub t: Option<usize>,
    /// Entry tolerance; zero for exact scalars.
    pub tol: f64,
}

/// Result of checking a code against its invariants.
#[derive(Debug, Clone, Serialize)]
pub struct CodeAudit {
    pub size: usize,
    pub dim: usize,
    pub exact: bool,
    pub diagonal_ok: bool,
    pub membership_ok: bool,
    /// First entry off the declared set.
    pub violation: Option<(usize, usize, f64)>,
    /// Which declared values occur off the diagonal.
    pub values_used: Vec<bool>,
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub psd_threshold: f64,
    pub rank: usize,
    pub rank_ok: bool,
    pub valid: bool,
}

fn default_tol<T: Scalar>() -> f64 {
    if T::EXACT {
        0.0
    } else {
        FLOAT_TOL.max(256.0 * T::UNIT_ROUNDOFF)
    }
}

fn close<T: Scalar>(a: &T, b: &T, tol: f64) -> bool {
    (a.clone() - b.clone()).is_negligible(tol)
}

impl<T: Scalar> SphericalCode<T> {
    pub fn new(gram: SymMatrix<T>, l: Vec<T>, dim: usize) -> Self {
        SphericalCode {
            gram,
            l,
            dim,
            alpha: None,
            t: None,
            tol: default_tol::<T>(),
        }
    }

    pub fn len(&self) -> usize {
        self.gram.order()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact(&self) -> bool {
        T::EXACT
    }

    /// Index of the declared value matching `x`.
    fn member(&self, x: &T) -> Option<usize> {
        self.l.iter().position(|v| close(x, v, self.tol))
    }

    pub fn validate(&self) -> CodeAudit {
        let n = self.len();
        let one = T::one();
        let diagonal_ok = (0..n).all(|i| close(self.gram.get(i, i), &one, self.tol));
        let mut violation = None;
        let mut values_used = vec![false; self.l.len()];
        for i in 0..n {
            for j in i + 1..n {
                let x = self.gram.get(i, j);
                match self.member(x) {
                    Some(k) => values_used[k] = true,
                    None if violation.is_none() => violation = Some((i, j, x.to_f64_lossy())),
                    None => {}
                }
            }
        }
        let PsdCheck {
            psd,
            min_eigenvalue,
            threshold,
        } = self.gram.psd(self.tol.max(default_tol::<T>()));
        let rank = self.gram.rank(self.tol.max(default_tol::<T>()));
        let rank_ok = rank <= self.dim;
        let membership_ok = violation.is_none();
        CodeAudit {
            size: n,
            dim: self.dim,
            exact: T::EXACT,
            diagonal_ok,
            membership_ok,
            violation,
            values_used,
            psd,
            min_eigenvalue,
            psd_threshold: threshold,
            rank,
            rank_ok,
            valid: diagonal_ok && membership_ok && psd && rank_ok,
        }
    }

    /// `{schema_version, alpha, t, L, dim, gram, exact}` with scalar entries
    /// as strings.
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "alpha": self.alpha.as_ref().map(lambda_json),
            "t": self.t,
            "L": self.l.iter().map(Scalar::to_text).collect::<Vec<_>>(),
            "dim": self.dim,
            "size": self.len(),
            "gram": self.gram.to_rows().iter().flatten().map(Scalar::to_text).collect::<Vec<_>>(),
            "exact": T::EXACT,
        })
    }

    /// Reads the layout written by [`SphericalCode::to_json`]; entries may be
    /// strings or numbers. The angle is not recovered from the file.
    pub fn from_json(v: &Value, alpha: Option<AlgebraicReal>) -> Result<Self, LinesError> {
        let bad = |what: &str| LinesError::InvalidCode(format!("missing or malformed {what}"));
        let entry = |e: &Value| -> Option<T> {
            match e {
                Value::String(s) => T::parse_text(s).or_else(|| crate::poly::parse_rational(s).map(|r| T::from_rational(&r))),
                Value::Number(x) => x.as_f64().and_then(T::from_f64),
                _ => None,
            }
        };
        let flat: Vec<T> = v["gram"]
            .as_array()
            .ok_or_else(|| bad("gram"))?
            .iter()
            .map(entry)
            .collect::<Option<_>>()
            .ok_or_else(|| bad("gram entry"))?;
        let n = (flat.len() as f64).sqrt().round() as usize;
        if n * n != flat.len() {
            return Err(bad("gram shape"));
        }
        let rows: Vec<Vec<T>> = flat.chunks(n.max(1)).map(|c| c.to_vec()).collect();
        let gram = SymMatrix::from_rows(rows).ok_or_else(|| bad("symmetric gram"))?;
        let l: Vec<T> = v["L"]
            .as_array()
            .ok_or_else(|| bad("L"))?
            .iter()
            .map(entry)
            .collect::<Option<_>>()
            .ok_or_else(|| bad("L entry"))?;
        let dim = v["dim"].as_u64().ok_or_else(|| bad("dim"))? as usize;
        let mut code = SphericalCode::new(gram, l, dim);
        code.alpha = alpha;
        code.t = v["t"].as_u64().map(|t| t as usize);
        Ok(code)
    }
}

/// The Gram matrix `I - A/lambda` of a spherical `{-1/lambda, 0}`-code.
/// The claimed dimension is its exact rank, `v(g)` minus the multiplicity
/// of `lambda` as an eigenvalue.
pub fn code_from_graph<T: Scalar>(g: &Graph, lam: &AlgebraicReal) -> Result<SphericalCode<T>, LinesError> {
    if lam.signum() <= 0 {
        return Err(LinesError::Domain("lambda must be positive".into()));
    }
    if compare_radius(g, lam) == RadiusComparison::Greater {
        return Err(LinesError::RadiusTooLarge);
    }
    let inv: T = scalar_of(&lam.inv()?)?;
    let n = g.order();
    let gram = SymMatrix::<T>::identity(n).sub(&SymMatrix::adjacency(g).scale(&inv));
    let dim = n - eigen_multiplicity(g, lam);
    let mut code = SphericalCode::new(gram, vec![-inv, T::zero()], dim);
    code.alpha = Some(alpha_of_lam_algebraic(lam)?);
    Ok(code)
}

/// `M = (1 - alpha) M0 ⊗ I_m + alpha J` with `m = floor((n - 1) / k)`,
/// where `k` is the dimension of `code0`: a `{±alpha}`-code of size
/// `m |code0|` in `R^n`.
pub fn kronecker_lift<T: Scalar>(code0: &SphericalCode<T>, alpha: &AlgebraicReal, n: usize) -> Result<SphericalCode<T>, LinesError> {
    let lam = lam_of_alpha_algebraic(alpha)?;
    let a: T = scalar_of(alpha)?;
    let neg_inv: T = -scalar_of::<T>(&lam.inv()?)?;
    let k = code0.dim;
    if k == 0 || n < k + 1 {
        return Err(LinesError::DimensionTooSmall { n, k });
    }
    let tol = code0.tol.max(default_tol::<T>());
    let s = code0.len();
    for i in 0..s {
        if !close(code0.gram.get(i, i), &T::one(), tol) {
            return Err(LinesError::InvalidCode(format!("diagonal entry {i} is not 1")));
        }
        for j in i + 1..s {
            let x = code0.gram.get(i, j);
            if !close(x, &neg_inv, tol) && !close(x, &T::zero(), tol) {
                return Err(LinesError::OffL {
                    i,
                    j,
                    value: x.to_f64_lossy(),
                });
            }
        }
    }
    let m = (n - 1) / k;
    let one = T::one();
    let lifted = code0.gram.scale(&(one - a.clone())).kron_identity(m);
    let gram = lifted.add(&SymMatrix::ones(s * m).scale(&a));
    let mut code = SphericalCode::new(gram, vec![-a.clone(), a], n);
    code.tol = tol;
    code.alpha = Some(alpha.clone());
    Ok(code)
}

/// `(1 - alpha) I_n + alpha J_n`: `n` lines at angle `arccos alpha` in `R^n`.
pub fn simplex_like_code<T: Scalar>(alpha: &AlgebraicReal, n: usize) -> Result<SphericalCode<T>, LinesError> {
    lam_of_alpha_algebraic(alpha)?;
    let a: T = scalar_of(alpha)?;
    let gram = SymMatrix::<T>::identity(n)
        .scale(&(T::one() - a.clone()))
        .add(&SymMatrix::ones(n).scale(&a));
    let mut code = SphericalCode::new(gram, vec![-a.clone(), a], n);
    code.alpha = Some(alpha.clone());
    Ok(code)
}

/// Underlying graph: an edge wherever the inner product is negative.
#[derive(Debug, Clone)]
pub struct UnderlyingGraph {
    pub graph: Graph,
    /// Nonzero entries inside the zero tolerance band, classified as zero.
    pub flagged: Vec<(usize, usize)>,
}

fn negative_pattern<T: Scalar>(code: &SphericalCode<T>) -> (Vec<Vec<bool>>, Vec<(usize, usize)>) {
    let n = code.len();
    let mut adj = vec![vec![false; n]; n];
    let mut flagged = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let x = code.gram.get(i, j);
            if x.is_zero() {
                continue;
            }
            if x.is_negligible(code.tol) {
                flagged.push((i, j));
            } else if x.is_negative() {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    (adj, flagged)
}

pub fn underlying_graph<T: Scalar>(code: &SphericalCode<T>, max_flags: usize) -> Result<UnderlyingGraph, LinesError> {
    let (adj, flagged) = negative_pattern(code);
    if flagged.len() > max_flags {
        return Err(LinesError::Ambiguous {
            count: flagged.len(),
            allowed: max_flags,
        });
    }
    let edges: Vec<(usize, usize)> = (0..adj.len())
        .flat_map(|i| (i + 1..adj.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| adj[i][j])
        .collect();
    Ok(UnderlyingGraph {
        graph: Graph::from_edges(code.len(), &edges)?,
        flagged,
    })
}

/// Greedy independent set: repeatedly delete a vertex of largest remaining
/// degree until no edges remain.
fn greedy_independent(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut alive = vec![true; n];
    loop {
        let deg = |v: usize, alive: &[bool]| (0..n).filter(|&u| alive[u] && adj[v][u]).count();
        let best = (0..n).filter(|&v| alive[v]).map(|v| (deg(v, &alive), v)).max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some((d, v)) if d > 0 => alive[v] = false,
            _ => break,
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

fn backtrack_independent(adj: &[Vec<bool>], t: usize, cand: Vec<usize>, chosen: &mut Vec<usize>, nodes: &mut u64) -> bool {
    if chosen.len() == t {
        return true;
    }
    if chosen.len() + cand.len() < t || *nodes >= INDEPENDENT_SET_NODES {
        return false;
    }
    *nodes += 1;
    for (idx, &v) in cand.iter().enumerate() {
        if chosen.len() + cand.len() - idx < t {
            return false;
        }
        let rest: Vec<usize> = cand[idx + 1..].iter().copied().filter(|&u| !adj[v][u]).collect();
        chosen.push(v);
        if backtrack_independent(adj, t, rest, chosen, nodes) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn independent_set(adj: &[Vec<bool>], t: usize) -> Result<Vec<usize>, LinesError> {
    let greedy = greedy_independent(adj);
    if greedy.len() >= t {
        return Ok(greedy[..t].to_vec());
    }
    let mut chosen = Vec::new();
    let mut nodes = 0;
    if backtrack_independent(adj, t, (0..adj.len()).collect(), &mut chosen, &mut nodes) {
        return Ok(chosen);
    }
    Err(LinesError::NoIndependentSet { t, found: greedy.len() })
}

/// Output of [`project_code`].
#[derive(Debug, Clone)]
pub struct Projection<T> {
    pub code: SphericalCode<T>,
    pub independent_set: Vec<usize>,
    pub switched: Vec<usize>,
    /// Indices of the input vectors kept (the class `C_alpha(∅)`).
    pub kept: Vec<usize>,
    /// Sizes of the discarded classes keyed by the size of `I_1`.
    pub class_sizes: BTreeMap<usize, usize>,
    /// `|C_alpha| - |C|`.
    pub discarded: usize,
}

/// Reduces a `{±alpha}`-code to an `L(alpha, t)`-code: picks an independent
/// set `I` of size `t` in the underlying graph, switches every other vector
/// with more than `t/2` neighbours in `I`, keeps the vectors with no
/// neighbour in `I`, and maps their inner products by
/// `x -> (x - c t alpha) / (1 - c t alpha)` with `c = alpha / (1 + (t-1) alpha)`.
pub fn project_code<T: Scalar>(code: &SphericalCode<T>, t: usize) -> Result<Projection<T>, LinesError> {
    let alpha = code
        .alpha
        .clone()
        .ok_or_else(|| LinesError::InvalidCode("angle not recorded".into()))?;
    let lam = lam_of_alpha_algebraic(&alpha)?;
    let threshold = lam.square().add(&alg_rat(1, 1));
    if threshold.cmp_rational(&rat(t as i64, 1)) != Ordering::Less {
        return Err(LinesError::Domain(format!(
            "t = {t} must exceed lambda^2 + 1 = {:.6}",
            threshold.to_f64()
        )));
    }
    let a: T = scalar_of(&alpha)?;
    let tol = code.tol.max(default_tol::<T>());
    let n = code.len();
    for i in 0..n {
        for j in i + 1..n {
            let x = code.gram.get(i, j);
            if !close(x, &a, tol) && !close(x, &-a.clone(), tol) {
                return Err(LinesError::OffL {
                    i,
                    j,
                    value: x.to_f64_lossy(),
                });
            }
        }
    }
    let (adj, _) = negative_pattern(code);
    let ind = independent_set(&adj, t)?;
    let in_i: Vec<bool> = (0..n).map(|v| ind.contains(&v)).collect();
    let mut sign = vec![false; n];
    let mut switched = Vec::new();
    for v in (0..n).filter(|&v| !in_i[v]) {
        let d = ind.iter().filter(|&&u| adj[v][u]).count();
        if 2 * d > t {
            sign[v] = true;
            switched.push(v);
        }
    }
    let edge = |u: usize, v: usize| adj[u][v] != (sign[u] != sign[v]);
    let mut class_sizes = BTreeMap::new();
    let mut kept = Vec::new();
    for v in (0..n).filter(|&v| !in_i[v]) {
        let d = ind.iter().filter(|&&u| edge(u, v)).count();
        if d == 0 {
            kept.push(v);
        } else {
            *class_sizes.entry(d).or_insert(0) += 1;
        }
    }
    let one = T::one();
    let tt: T = from_int(t as i64);
    let c = a.clone() / (one.clone() + (tt.clone() - one.clone()) * a.clone());
    let cta = c * tt * a;
    let denom = one.clone() - cta.clone();
    let gram = SymMatrix::from_fn(kept.len(), |p, q| {
        if p == q {
            return one.clone();
        }
        let (u, v) = (kept[p], kept[q]);
        let x = code.gram.get(u, v).clone();
        let x = if sign[u] != sign[v] { -x } else { x };
        (x - cta.clone()) / denom.clone()
    });
    let l = LSet::new(&alpha, t)?.values::<T>()?;
    let mut out = SphericalCode::new(gram, l.to_vec(), code.dim);
    out.tol = tol;
    out.alpha = Some(alpha);
    out.t = Some(t);
    let k = kept.len();
    for p in 0..k {
        for q in p + 1..k {
            let x = out.gram.get(p, q);
            if out.member(x).is_none() {
                return Err(LinesError::OffL {
                    i: kept[p],
                    j: kept[q],
                    value: x.to_f64_lossy(),
                });
            }
        }
    }
    Ok(Projection {
        code: out,
        independent_set: ind,
        switched,
        discarded: n - k,
        kept,
        class_sizes,
    })
}

/// Report of [`rank_bound_check`].
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub size: usize,
    pub n: usize,
    pub rank_gram: usize,
    pub rank_i_minus_a: usize,
    pub identity_holds: bool,
    /// First entry where `(1 + 1/s) M = I - A/lambda + J/s` fails, with
    /// `s = t + 1/alpha - 1`.
    pub violation: Option<(usize, usize, f64)>,
    pub passed: bool,
}

/// Checks `rank(I - A/lambda) <= rank(M) + 1 <= n + 1` for an
/// `L(alpha, t)`-code through the identity relating `M` and `A`.
pub fn rank_bound_check<T: Scalar>(code: &SphericalCode<T>, n: usize) -> Result<RankReport, LinesError> {
    let size = code.len();
    if size == 0 {
        return Ok(RankReport {
            size,
            n,
            rank_gram: 0,
            rank_i_minus_a: 0,
            identity_holds: true,
            violation: None,
            passed: true,
        });
    }
    let alpha = code
        .alpha
        .clone()
        .ok_or_else(|| LinesError::InvalidCode("angle not recorded".into()))?;
    let t = code.t.ok_or_else(|| LinesError::InvalidCode("t not recorded".into()))?;
    let lam: T = scalar_of(&lam_of_alpha_algebraic(&alpha)?)?;
    let a: T = scalar_of(&alpha)?;
    let one = T::one();
    let s = from_int::<T>(t as i64) + one.clone() / a - one.clone();
    let (adj, _) = negative_pattern(code);
    let inv_lam = one.clone() / lam;
    let ia = SymMatrix::from_fn(size, |i, j| {
        if i == j {
            one.clone()
        } else if adj[i][j] {
            -inv_lam.clone()
        } else {
            T::zero()
        }
    });
    let tol = code.tol.max(default_tol::<T>());
    let lhs_scale = one.clone() + one.clone() / s.clone();
    let js = one / s;
    let mut violation = None;
    'outer: for i in 0..size {
        for j in i..size {
            let lhs = lhs_scale.clone() * code.gram.get(i, j).clone();
            let rhs = ia.get(i, j).clone() + js.clone();
            if !close(&lhs, &rhs, tol) {
                violation = Some((i, j, code.gram.get(i, j).to_f64_lossy()));
                break 'outer;
            }
        }
    }
    let rank_gram = code.gram.rank(tol);
    let rank_i_minus_a = ia.rank(tol);
    let identity_holds = violation.is_none();
    Ok(RankReport {
        size,
        n,
        rank_gram,
        rank_i_minus_a,
        identity_holds,
        violation,
        passed: identity_holds && rank_i_minus_a <= rank_gram + 1 && rank_gram <= n,
    })
}

/// One upper bound on `N_alpha(n)` whose hypotheses hold.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    pub hypothesis: String,
    pub statement: String,
    /// Coefficient of `n`, exact where available.
    pub coefficient: String,
    pub coefficient_approx: f64,
    /// Value at `n`, ignoring any `O(1)` or `o(n)` term.
    pub value: f64,
    /// Whether the row holds only up to an unspecified lower-order term.
    pub asymptotic: bool,
}

fn exact_text(a: &AlgebraicReal) -> String {
    match a.as_rational() {
        Some(r) => r.to_string(),
        None => a.notation(),
    }
}

fn is_monic_up_to_sign(p: &crate::poly::IntPoly) -> bool {
    p.leading().is_some_and(|l| l.abs().is_one())
}

/// Whether `lam` lies below `lambda*` and avoids every `alpha_m`, so that a
/// finite forbidden-subgraph characterization exists.
pub fn has_finite_characterization(lam: &AlgebraicReal) -> bool {
    if lam.cmp_exact(&lambda_star()) != Ordering::Less {
        return false;
    }
    lam.cmp_rational(&rat(2, 1)) == Ordering::Less || choose_m(lam).is_ok()
}

/// Every upper bound on `N_alpha(n)` whose hypotheses hold for
/// `(alpha, n)`. `order` is the spectral radius order of `lambda` when known.
pub fn size_upper_bound(alpha: &AlgebraicReal, n: usize, order: Option<&OrderValue>) -> Result<Vec<BoundRow>, LinesError> {
    if n == 0 {
        return Err(LinesError::Domain("n must be positive".into()));
    }
    let lam = lam_of_alpha_algebraic(alpha)?;
    let nf = n as f64;
    let nq = rat(n as i64, 1);
    let mut rows = Vec::new();
    let class = classify_lambda(&lam);
    let monic = is_monic_up_to_sign(&class.minpoly);
    let degree = class.minpoly.degree().unwrap_or(1);

    if has_finite_characterization(&lam) {
        let coef = match order {
            Some(OrderValue::Finite(k)) if *k >= 2 => Some(rat(*k as i64, *k as i64 - 1)),
            Some(OrderValue::InfiniteAnalytic(_)) => Some(rat(1, 1)),
            _ => None,
        };
        if let Some(c) = coef {
            let cf = crate::poly::rational_to_f64(&c);
            rows.push(BoundRow {
                name: "spectral_radius_order",
                hypothesis: "lambda < lambda* and lambda is not a Hoffman number alpha_m".into(),
                statement: format!("N <= {c} n + O(1)"),
                coefficient: c.to_string(),
                coefficient_approx: cf,
                value: cf * nf,
                asymptotic: true,
            });
        }
    }

    if monic && class.class != LambdaClass::NotTotallyReal && degree >= 2 {
        let c = rat(degree as i64, degree as i64 - 1);
        let v = &c * (&nq + BigRational::one());
        rows.push(BoundRow {
            name: "algebraic_degree",
            hypothesis: format!("lambda is a totally real algebraic integer of degree {degree}"),
            statement: format!("N <= {c} (n + 1)"),
            coefficient: c.to_string(),
            coefficient_approx: crate::poly::rational_to_f64(&c),
            value: crate::poly::rational_to_f64(&v),
            asymptotic: false,
        });
    }

    if lam.cmp_rational(&rat(2, 1)) != Ordering::Less {
        let c = alg_rat(5, 4).add(&lam.square().inv()?);
        let cf = c.to_f64();
        rows.push(BoundRow {
            name: "average_degree",
            hypothesis: "lambda >= 2".into(),
            statement: format!("N <= (1 + 1/4 + 1/lambda^2 + o(1)) n = ({} + o(1)) n", exact_text(&c)),
            coefficient: exact_text(&c),
            coefficient_approx: cf,
            value: cf * nf,
            asymptotic: true,
        });
    }

    let a2 = alpha.square();
    if a2.mul_rational(&nq).cmp_rational(&BigRational::one()) == Ordering::Less {
        let one = BigRational::one();
        let c = a2.mobius(&-one.clone(), &one, &-nq.clone(), &one)?;
        let v = c.mul_rational(&nq);
        rows.push(BoundRow {
            name: "relative",
            hypothesis: "n < 1/alpha^2".into(),
            statement: "N <= (1 - alpha^2) / (1 - n alpha^2) n".into(),
            coefficient: exact_text(&c),
            coefficient_approx: c.to_f64(),
            value: v.to_f64(),
            asymptotic: false,
        });
    }

    if !monic || class.class == LambdaClass::NotTotallyReal {
        let why = if !monic { "not an algebraic integer" } else { "not totally real" };
        rows.push(BoundRow {
            name: "not_totally_real_integer",
            hypothesis: format!("lambda is {why}"),
            statement: "n <= N <= n + 1".into(),
            coefficient: "1".into(),
            coefficient_approx: 1.0,
            value: nf + 1.0,
            asymptotic: false,
        });
    } else if class.class == LambdaClass::TotallyRealNotMax {
        rows.push(BoundRow {
            name: "larger_conjugate",
            hypothesis: "lambda is a totally real algebraic integer with a larger conjugate".into(),
            statement: "n <= N <= n + 2".into(),
            coefficient: "1".into(),
            coefficient_approx: 1.0,
            value: nf + 2.0,
            asymptotic: false,
        });
    }

    let sqrt2 = alg_rat(2, 1).sqrt()?;
    let exceptional = [alg_rat(1, 1), sqrt2, alg_rat(2, 1)].iter().any(|e| lam.cmp_exact(e) == Ordering::Equal);
    if !exceptional {
        rows.push(BoundRow {
            name: "uniform",
            hypothesis: "lambda is not 1, sqrt(2) or 2".into(),
            statement: "N <= 1.49 n + O(1)".into(),
            coefficient: "149/100".into(),
            coefficient_approx: 1.49,
            value: 1.49 * nf,
            asymptotic: true,
        });
    }
    Ok(rows)
}

/// `floor((n - 1) / (k - 1)) k` for finite `k`, and `n` when `k` is infinite
/// (`None`).
pub fn lower_bound_count(n: usize, k: Option<usize>) -> Result<usize, LinesError> {
    if n == 0 {
        return Err(LinesError::Domain("n must be positive".into()));
    }
    match k {
        None => Ok(n),
        Some(k) if k >= 2 => Ok((n - 1) / (k - 1) * k),
        Some(k) => Err(LinesError::Domain(format!("spectral radius order {k} is below 2"))),
    }
}

/// Materializes the lower bound: the lift of `I - A/lambda` for a witness
/// graph with spectral radius `lambda`, or `(1 - alpha) I + alpha J` without
/// one. The size is checked against [`lower_bound_count`].
pub fn lower_bound_construction<T: Scalar>(
    alpha: &AlgebraicReal,
    n: usize,
    witness: Option<&Graph>,
) -> Result<SphericalCode<T>, LinesError> {
    let code = match witness {
        None => simplex_like_code(alpha, n)?,
        Some(g) => {
            let lam = lam_of_alpha_algebraic(alpha)?;
            if compare_radius(g, &lam) != RadiusComparison::Equal || !g.is_connected() {
                return Err(LinesError::Domain("witness must be connected with spectral radius lambda".into()));
            }
            let code0 = code_from_graph::<T>(g, &lam)?;
            kronecker_lift(&code0, alpha, n)?
        }
    };
    let expected = lower_bound_count(n, witness.map(Graph::order))?;
    if code.len() != expected {
        return Err(LinesError::InvalidCode(format!("constructed {} vectors, expected {expected}", code.len())));
    }
    Ok(code)
}

/// A `t` for which `1 - lambda1(G0)/lambda + v(G0)/(t + 1/alpha - 1) < 0`
/// for every member, and `t > lambda^2 + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ChooseT {
    pub t: usize,
    /// Left-hand side per member, evaluated with the certified lower bound
    /// on `lambda1`.
    pub margins: Vec<f64>,
}

/// Smallest integer strictly above `a`.
pub fn ceil_strict(a: &AlgebraicReal) -> BigInt {
    let mut f = BigInt::from(a.to_f64().floor() as i64);
    while a.cmp_rational(&BigRational::from_integer(f.clone())) == Ordering::Less {
        f -= 1;
    }
    while a.cmp_rational(&BigRational::from_integer(&f + 1)) != Ordering::Less {
        f += 1;
    }
    f + 1
}

pub fn choose_t(alpha: &AlgebraicReal, family: &[Graph]) -> Result<ChooseT, LinesError> {
    let lam = lam_of_alpha_algebraic(alpha)?;
    let lam_f = lam.to_f64();
    let inv_alpha = 1.0 / alpha.to_f64();
    let mut t = ceil_strict(&lam.square().add(&alg_rat(1, 1))).to_usize().unwrap_or(usize::MAX).max(1);
    let mut lows = Vec::with_capacity(family.len());
    for g in family {
        if compare_radius(g, &lam) != RadiusComparison::Greater {
            return Err(LinesError::Domain("every member must have spectral radius above lambda".into()));
        }
        let b = radius_bracket(g)?;
        let lo = crate::poly::rational_to_f64(&b.lo).max(b.value - b.error_bound());
        let gap = lo / lam_f - 1.0;
        if gap <= 0.0 {
            return Err(LinesError::Domain("spectral radius too close to lambda".into()));
        }
        let need = g.order() as f64 / gap - inv_alpha + 1.0;
        t = t.max(need.floor().max(0.0) as usize + 1);
        lows.push((lo, g.order()));
    }
    let margins: Vec<f64> = lows
        .iter()
        .map(|&(lo, v)| 1.0 - lo / lam_f + v as f64 / (t as f64 + inv_alpha - 1.0))
        .collect();
    if margins.iter().any(|&m| m >= 0.0) {
        return Err(LinesError::Domain("selected t fails the strict inequality".into()));
    }
    Ok(ChooseT { t, margins })
}

/// Largest clique in a graph on at most 64 vertices.
pub fn clique_number(g: &Graph) -> usize {
    fn grow(g: &Graph, r: usize, mut p: u64, best: &mut usize) {
        if p == 0 {
            *best = (*best).max(r);
            return;
        }
        while p != 0 {
            if r + p.count_ones() as usize <= *best {
                return;
            }
            let v = p.trailing_zeros() as usize;
            p &= p - 1;
            grow(g, r + 1, p & g.neighbors(v), best);
        }
    }
    let mut best = 0;
    grow(g, 0, g.vertex_mask(), &mut best);
    best
}

/// Whether the underlying graph of a `{±alpha}`-code has clique number at
/// most `1 + floor(1/alpha)`; returns the clique number and the bound.
pub fn clique_bound_check<T: Scalar>(code: &SphericalCode<T>) -> Result<(usize, usize, bool), LinesError> {
    let alpha = code
        .alpha
        .clone()
        .ok_or_else(|| LinesError::InvalidCode("angle not recorded".into()))?;
    let g = underlying_graph(code, 0)?.graph;
    let omega = clique_number(&g);
    // 1 + floor(1/alpha)
    let bound = ceil_strict(&alpha.inv()?).to_usize().unwrap_or(usize::MAX);
    Ok((omega, bound, omega <= bound))
}

/// Parameters of the average-degree argument for a given `eps`.
#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundParameters {
    pub eps: f64,
    /// Ball radius `k` with `2 cos(pi/(k+2)) > 2 / sqrt(1 + 4 eps)`.
    pub k: usize,
    pub lambda_prime: f64,
    /// Average degree threshold `(lambda/lambda')^2 + 1`.
    pub d: f64,
    /// Smallest `D` with `sqrt(D) > lambda`, so the star `S_D` has spectral
    /// radius above `lambda`.
    pub star_degree: usize,
    /// Smallest `t` with `t > lambda^2 + 1`.
    pub t_min: usize,
    pub coefficient: f64,
}

pub fn upper_bound_parameters(lam: &AlgebraicReal, eps: f64) -> Result<UpperBoundParameters, LinesError> {
    if !(eps > 0.0) {
        return Err(LinesError::Domain("eps must be positive".into()));
    }
    if lam.cmp_rational(&rat(2, 1)) == Ordering::Less {
        return Err(LinesError::Domain("lambda must be at least 2".into()));
    }
    let target = 2.0 / (1.0 + 4.0 * eps).sqrt();
    let mut k = 0usize;
    let lp = |k: usize| 2.0 * (std::f64::consts::PI / (k as f64 + 2.0)).cos();
    while lp(k) <= target {
        k += 1;
    }
    let l = lam.to_f64();
    let lambda_prime = lp(k);
    let sq = lam.square();
    let star_degree = ceil_strict(&sq).to_usize().unwrap_or(usize::MAX);
    let t_min = ceil_strict(&sq.add(&alg_rat(1, 1))).to_usize().unwrap_or(usize::MAX);
    Ok(UpperBoundParameters {
        eps,
        k,
        lambda_prime,
        d: (l / lambda_prime).powi(2) + 1.0,
        star_degree,
        t_min,
        coefficient: 1.25 + 1.0 / (l * l) + eps,
    })
}
