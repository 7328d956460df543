//! The spectral radius order: the fewest vertices of a graph whose spectral
//! radius equals a given algebraic number.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algnum::{classify_lambda, AlgebraicReal, LambdaClass, Minimality};
use crate::forbidden::{lambda_json, SCHEMA_VERSION};
use crate::graphkit::{write_graph6, EnumBudget, EnumSpec, Enumerator, Graph, GraphError};
use crate::spectra::{compare_radius, RadiusComparison};

#[derive(Debug, Clone, Error)]
pub enum OrderError {
    #[error("lambda must be positive")]
    NonPositive,
    #[error("k must be at least 2")]
    InvalidK,
    #[error("witness on {k} vertices is below the algebraic degree {degree}")]
    DegreeViolation { k: usize, degree: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderValue {
    Finite(usize),
    /// No witness on at most this many vertices.
    InfiniteUpTo(usize),
    /// Provably infinite, with the reason.
    InfiniteAnalytic(String),
}

#[derive(Debug, Clone)]
pub struct OrderResult {
    pub lam: AlgebraicReal,
    pub value: OrderValue,
    /// Connected witness in canonical labelling.
    pub witness: Option<Graph>,
    pub degree: usize,
    pub minimality: Minimality,
}

impl OrderResult {
    pub fn k(&self) -> Option<usize> {
        match self.value {
            OrderValue::Finite(k) => Some(k),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "lambda": lambda_json(&self.lam),
            "degree": self.degree,
            "minimality": self.minimality,
            "witness": self.witness.as_ref().map(write_graph6),
        });
        let obj = v.as_object_mut().expect("object");
        match &self.value {
            OrderValue::Finite(k) => obj.insert("k".into(), json!(k)),
            OrderValue::InfiniteUpTo(b) => obj.insert("infinite_up_to".into(), json!(b)),
            OrderValue::InfiniteAnalytic(r) => obj.insert("infinite_analytic".into(), json!(r)),
        };
        v
    }
}

/// Scans connected graphs by order (a disconnected graph attains its
/// spectral radius on a component) for one whose spectral radius equals
/// `lam`. Numbers that are not totally real algebraic integers at least as
/// large as all their conjugates are rejected without search.
pub fn spectral_order(lam: &AlgebraicReal, max_order: usize, budget: &EnumBudget) -> Result<OrderResult, OrderError> {
    if lam.signum() <= 0 {
        return Err(OrderError::NonPositive);
    }
    let c = classify_lambda(lam);
    let degree = c.minpoly.degree().expect("nonzero");
    let mut result = OrderResult {
        lam: lam.clone(),
        value: OrderValue::InfiniteUpTo(max_order),
        witness: None,
        degree,
        minimality: c.minimality,
    };
    let reason = if !c.minpoly.leading().is_some_and(|l| l.magnitude() == &num_bigint::BigUint::from(1u32)) {
        Some("not an algebraic integer".to_string())
    } else {
        match c.class {
            LambdaClass::NotTotallyReal => Some("not totally real".to_string()),
            LambdaClass::TotallyRealNotMax => Some("a conjugate is larger".to_string()),
            LambdaClass::TotallyRealMax => None,
        }
    };
    if let Some(r) = reason {
        result.value = OrderValue::InfiniteAnalytic(r);
        return Ok(result);
    }
    let mut e = Enumerator::new(EnumSpec::connected(max_order), *budget);
    while let Some(level) = e.next_level() {
        let (k, graphs) = level?;
        if let Some(g) = graphs.into_iter().find(|g| compare_radius(g, lam) == RadiusComparison::Equal) {
            if k < degree {
                return Err(OrderError::DegreeViolation { k, degree });
            }
            result.value = OrderValue::Finite(k);
            result.witness = Some(g);
            return Ok(result);
        }
    }
    Ok(result)
}

/// `k / (k - 1)`, or 1 when `k` is infinite (`None`).
pub fn coefficient(k: Option<usize>) -> Result<BigRational, OrderError> {
    match k {
        None => Ok(BigRational::from_integer(BigInt::from(1))),
        Some(k) if k >= 2 => Ok(BigRational::new(BigInt::from(k), BigInt::from(k - 1))),
        Some(_) => Err(OrderError::InvalidK),
    }
}
