//! Finite forbidden-subgraph characterisations of the family of connected
//! graphs with spectral radius at most `lam`, built from the explicit
//! families and an exhaustive search over graphs of bounded degree and
//! diameter or radius, together with brute-force checks.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algnum::{alpha, lambda_star, AlgebraicReal};
use crate::graphkit::{
    canonical_labeling, contains_subgraph, write_graph6, EnumBudget, EnumSpec, Enumerator, Graph,
    GraphError,
};
use crate::spectra::{compare_radius, lambda1, make_family, FamilySpec, RadiusComparison, SpectraError};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest `m` tried when locating `lam` among the `alpha_m`.
pub const MAX_M: usize = 40;

#[derive(Debug, Clone, Error)]
pub enum ForbiddenError {
    #[error("UNSUPPORTED_LAMBDA: {0}")]
    UnsupportedLambda(String),
    #[error("BUDGET_EXCEEDED: enumeration stopped after order {completed_order} with {frontier} graphs unexplored")]
    BudgetExceeded {
        partial: Box<ForbiddenFamily>,
        frontier: usize,
        completed_order: usize,
    },
    #[error("search limit reached: {0}")]
    SearchLimit(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    /// `lam < 2`: paths, the star `S_4` and graphs of maximum degree 3 with
    /// bounded diameter.
    One,
    /// `2 <= lam < lambda*`: the explicit families and graphs of maximum
    /// degree 4 with bounded radius.
    Two,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionLog {
    pub case: Case,
    pub m: Option<usize>,
    pub n: usize,
    pub max_degree: usize,
    /// Diameter bound (case one) or radius bound (case two) for the search.
    pub metric_bound: usize,
    /// Vertex count beyond which no graph meets the degree and metric bounds.
    pub moore_bound: usize,
    pub budget_vertices: usize,
    pub budget_extensions: u64,
    pub completed_order: usize,
    pub extensions: u64,
    pub enumerated: usize,
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct ForbiddenFamily {
    pub lam: AlgebraicReal,
    /// Ordered by vertex count, then canonical certificate.
    pub members: Vec<Graph>,
    pub log: ConstructionLog,
}

impl ForbiddenFamily {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "lambda": lambda_json(&self.lam),
            "case": self.log.case,
            "m": self.log.m,
            "n": self.log.n,
            "members": self.members.iter().map(write_graph6).collect::<Vec<_>>(),
            "log": self.log,
        })
    }
}

pub fn lambda_json(lam: &AlgebraicReal) -> Value {
    let (lo, hi) = lam.interval();
    json!({
        "minpoly": lam.poly().to_string(),
        "interval": [lo.to_string(), hi.to_string()],
        "approx": lam.to_f64(),
    })
}

fn canonical_sort(members: &mut Vec<Graph>) {
    let mut keyed: Vec<(usize, Vec<u8>, Graph)> = members
        .drain(..)
        .map(|g| {
            let cg = g.permuted(&canonical_labeling(&g));
            (cg.order(), write_graph6(&cg).into_bytes(), cg)
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    members.extend(keyed.into_iter().map(|(_, _, g)| g));
}

fn greater(g: &Graph, lam: &AlgebraicReal) -> bool {
    compare_radius(g, lam) == RadiusComparison::Greater
}

fn check_lambda(lam: &AlgebraicReal) -> Result<(), ForbiddenError> {
    if lam.signum() <= 0 {
        return Err(ForbiddenError::UnsupportedLambda(format!("{lam} is not positive")));
    }
    if lam.cmp_exact(&lambda_star()) != Ordering::Less {
        return Err(ForbiddenError::UnsupportedLambda(format!(
            "{lam} is at least lambda* = sqrt(2 + sqrt 5)"
        )));
    }
    Ok(())
}

/// Smallest `m` with `alpha_m > lam`, for `2 <= lam < lambda*` different from
/// every `alpha_m`.
pub fn choose_m(lam: &AlgebraicReal) -> Result<usize, ForbiddenError> {
    check_lambda(lam)?;
    if lam.cmp_rational(&num_rational::BigRational::from_integer(2.into())) == Ordering::Less {
        return Err(ForbiddenError::UnsupportedLambda(format!("{lam} is below 2; case one applies")));
    }
    for m in 2..=MAX_M {
        let a = alpha(m).map_err(|e| ForbiddenError::Internal(e.to_string()))?;
        match a.cmp_exact(lam) {
            Ordering::Equal => {
                return Err(ForbiddenError::UnsupportedLambda(format!("{lam} equals alpha_{m}")));
            }
            Ordering::Greater => return Ok(m),
            Ordering::Less => {}
        }
    }
    Err(ForbiddenError::SearchLimit(format!("{lam} exceeds alpha_{MAX_M}")))
}

/// Smallest `n > m` with `A_n`, `E_{m,n}`, `F_n` above `lam` and, when
/// `m >= 3`, every `B_{m1,n+1,m2}` with `m1, m2 < m` at most `lam`.
pub fn choose_n(lam: &AlgebraicReal, m: usize) -> Result<usize, ForbiddenError> {
    let max_n = crate::graphkit::MAX_VERTICES - 2 * m - 4;
    for n in m + 1..=max_n {
        if !greater(&make_family(FamilySpec::A(n))?, lam)
            || !greater(&make_family(FamilySpec::E(m, n))?, lam)
            || !greater(&make_family(FamilySpec::F(n))?, lam)
        {
            continue;
        }
        if m >= 3 {
            let all_below = (1..m).all(|m1| {
                (1..m).all(|m2| {
                    make_family(FamilySpec::B(m1, n + 1, m2))
                        .map(|b| !greater(&b, lam))
                        .unwrap_or(false)
                })
            });
            if !all_below {
                continue;
            }
            check_b_monotone(m, n + 1)?;
        }
        return Ok(n);
    }
    Err(ForbiddenError::SearchLimit(format!("no n up to {max_n} fits within 64 vertices")))
}

/// Numeric guard that `lambda1(B_{m1,k,m2})` decreases in `k` up to `n`.
fn check_b_monotone(m: usize, n: usize) -> Result<(), ForbiddenError> {
    for m1 in 1..m {
        for m2 in m1..m {
            if (m1, m2) == (1, 1) {
                continue;
            }
            let mut prev = f64::INFINITY;
            for k in 0..=n {
                let r = lambda1(&make_family(FamilySpec::B(m1, k, m2))?);
                if r > prev + 1e-12 {
                    return Err(ForbiddenError::Internal(format!(
                        "spectral radius of B_{{{m1},{k},{m2}}} does not decrease"
                    )));
                }
                prev = r;
            }
        }
    }
    Ok(())
}

/// Smallest `n` with `lambda1(P_n) > lam`.
fn path_threshold(lam: &AlgebraicReal) -> Result<usize, ForbiddenError> {
    for n in 1..=crate::graphkit::MAX_VERTICES {
        if greater(&Graph::path(n)?, lam) {
            return Ok(n);
        }
    }
    Err(ForbiddenError::SearchLimit("no path within 64 vertices exceeds lambda".into()))
}

fn moore(max_degree: usize, depth: usize) -> usize {
    // 1 + D * sum_{i < depth} (D - 1)^i, saturating
    let mut total: usize = 1;
    let mut layer: usize = max_degree;
    for _ in 0..depth {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(max_degree - 1);
    }
    total
}

/// Builds the forbidden family. When the enumeration budget stops the
/// exhaustive search early the partial family is returned inside
/// [`ForbiddenError::BudgetExceeded`]; it is complete for graphs up to the
/// completed order.
pub fn build_family(lam: &AlgebraicReal, budget: &EnumBudget) -> Result<ForbiddenFamily, ForbiddenError> {
    check_lambda(lam)?;
    let two = num_rational::BigRational::from_integer(2.into());
    let (case, m, n, mut members, spec, metric_bound, moore_bound) = if lam.cmp_rational(&two) == Ordering::Less {
        let n = path_threshold(lam)?;
        let members = vec![Graph::star(4)?, Graph::path(n)?];
        let d = n.saturating_sub(1);
        let mb = moore(3, d);
        let spec = EnumSpec::connected(mb.min(crate::graphkit::MAX_VERTICES))
            .with_max_degree(3)
            .with_max_diameter(d);
        (Case::One, None, n, members, spec, d, mb)
    } else {
        let m = choose_m(lam)?;
        let n = choose_n(lam, m)?;
        let mut members = vec![
            make_family(FamilySpec::S(5))?,
            make_family(FamilySpec::A(n))?,
            make_family(FamilySpec::E(m, n))?,
            make_family(FamilySpec::F(n))?,
        ];
        for j in 0..=n {
            members.push(make_family(FamilySpec::B(m, j, 1))?);
        }
        for j in 2..=m + n {
            if FamilySpec::D(j).order() <= crate::graphkit::MAX_VERTICES {
                members.push(make_family(FamilySpec::D(j))?);
            }
        }
        let r = m + n - 1;
        let mb = moore(4, r);
        let spec = EnumSpec::connected(mb.min(crate::graphkit::MAX_VERTICES))
            .with_max_degree(4)
            .with_max_radius(r);
        (Case::Two, Some(m), n, members, spec, r, mb)
    };
    if let Some(bad) = members.iter().find(|g| !greater(g, lam)) {
        return Err(ForbiddenError::Internal(format!(
            "listed graph {} does not exceed lambda",
            write_graph6(bad)
        )));
    }
    let mut log = ConstructionLog {
        case,
        m,
        n,
        max_degree: spec.max_degree.unwrap_or(0),
        metric_bound,
        moore_bound,
        budget_vertices: budget.max_vertices,
        budget_extensions: budget.max_extensions,
        completed_order: 0,
        extensions: 0,
        enumerated: 0,
        complete: false,
    };
    let mut e = Enumerator::new(spec, *budget);
    let mut stopped = None;
    while let Some(level) = e.next_level() {
        match level {
            Ok((_, graphs)) => {
                log.enumerated += graphs.len();
                let over: Vec<Graph> = graphs.into_par_iter().filter(|g| greater(g, lam)).collect();
                members.extend(over);
            }
            Err(GraphError::BudgetExceeded { completed_order, .. }) => {
                stopped = Some(completed_order);
                break;
            }
            Err(other) => return Err(other.into()),
        }
    }
    log.completed_order = e.completed_order();
    log.extensions = e.extensions();
    log.complete = stopped.is_none();
    canonical_sort(&mut members);
    let fam = ForbiddenFamily {
        lam: lam.clone(),
        members,
        log,
    };
    match stopped {
        None => Ok(fam),
        Some(completed_order) => Err(ForbiddenError::BudgetExceeded {
            frontier: e.frontier_size(),
            completed_order,
            partial: Box::new(fam),
        }),
    }
}

/// Drops every member that contains another member.
pub fn minimize_family(fam: &ForbiddenFamily) -> ForbiddenFamily {
    let mut order: Vec<&Graph> = fam.members.iter().collect();
    order.sort_by_key(|g| (g.order(), g.edge_count()));
    let mut kept: Vec<Graph> = Vec::new();
    for g in order {
        if !kept.iter().any(|h| contains_subgraph(g, h)) {
            kept.push(g.clone());
        }
    }
    canonical_sort(&mut kept);
    ForbiddenFamily {
        lam: fam.lam.clone(),
        members: kept,
        log: fam.log.clone(),
    }
}

/// Connected graphs on at most `up_to` vertices whose spectral radius
/// exceeds `lam` while every proper subgraph stays at most `lam`. Since every
/// proper subgraph of a connected graph lies inside some single-edge
/// deletion, checking edge deletions suffices.
pub fn minimal_obstructions(
    lam: &AlgebraicReal,
    up_to: usize,
    budget: &EnumBudget,
) -> Result<Vec<Graph>, ForbiddenError> {
    let mut out = Vec::new();
    let mut e = Enumerator::new(EnumSpec::connected(up_to), *budget);
    while let Some(level) = e.next_level() {
        let (_, graphs) = level?;
        let found: Vec<Graph> = graphs
            .into_par_iter()
            .filter(|g| {
                greater(g, lam)
                    && g.edges().all(|(u, v)| {
                        let mut h = g.clone();
                        h.remove_edge(u, v).expect("edge");
                        !greater(&h, lam)
                    })
            })
            .collect();
        out.extend(found);
    }
    canonical_sort(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleFailure {
    pub graph6: String,
    pub radius_at_most_lambda: bool,
    pub contains_member: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub up_to: usize,
    pub checked: usize,
    pub in_family: usize,
    pub failures: Vec<OracleFailure>,
    pub passed: bool,
}

/// Checks `lambda1(g) <= lam` against "contains no member" for every
/// connected graph on at most `up_to` vertices.
pub fn oracle_check(fam: &ForbiddenFamily, up_to: usize, budget: &EnumBudget) -> Result<OracleReport, ForbiddenError> {
    let mut e = Enumerator::new(EnumSpec::connected(up_to), *budget);
    let mut checked = 0;
    let mut in_family = 0;
    let mut failures = Vec::new();
    while let Some(level) = e.next_level() {
        let (_, graphs) = level?;
        checked += graphs.len();
        let results: Vec<(bool, bool, &Graph)> = graphs
            .par_iter()
            .map(|g| {
                let inside = !greater(g, &fam.lam);
                let contains = fam
                    .members
                    .iter()
                    .any(|h| h.order() <= g.order() && h.edge_count() <= g.edge_count() && contains_subgraph(g, h));
                (inside, contains, g)
            })
            .collect();
        for (inside, contains, g) in results {
            if inside {
                in_family += 1;
            }
            if inside == contains {
                failures.push(OracleFailure {
                    graph6: write_graph6(g),
                    radius_at_most_lambda: inside,
                    contains_member: contains,
                });
            }
        }
    }
    Ok(OracleReport {
        up_to,
        checked,
        in_family,
        passed: failures.is_empty(),
        failures,
    })
}

/// The family from [`build_family`], accepting a budget-limited partial one.
pub fn build_family_or_partial(
    lam: &AlgebraicReal,
    budget: &EnumBudget,
) -> Result<(ForbiddenFamily, bool), ForbiddenError> {
    match build_family(lam, budget) {
        Ok(f) => Ok((f, true)),
        Err(ForbiddenError::BudgetExceeded { partial, .. }) => Ok((*partial, false)),
        Err(e) => Err(e),
    }
}
