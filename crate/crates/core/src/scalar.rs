//! The scalar abstraction shared by matrices and spherical codes: exact
//! rationals or binary floating point of several widths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use num_bigfloat::BigFloat;

use crate::linalg::{jacobi_eigenvalues, rational_is_psd, rational_rank, SymMatrix};

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    /// Smallest eigenvalue (approximate for exact scalars).
    pub min_eigenvalue: f64,
    /// Threshold applied to the smallest eigenvalue; zero for exact scalars.
    pub threshold: f64,
}

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Whether arithmetic is exact.
    const EXACT: bool;

    /// Relative rounding error of one operation; zero when exact.
    const UNIT_ROUNDOFF: f64;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// Zero test: exact equality for exact scalars, `|x| <= tol` otherwise.
    fn is_negligible(&self, tol: f64) -> bool;

    /// Square root, `None` when it is not representable.
    fn sqrt_opt(&self) -> Option<Self>;

    /// Text form that [`Scalar::parse_text`] reads back without loss.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Option<Self>;

    /// Rank; for inexact scalars eigenvalues with modulus at most
    /// `rel_tol * max(1, max |eigenvalue|)` count as zero.
    fn sym_rank(m: &SymMatrix<Self>, rel_tol: f64) -> usize;

    /// Positive semidefiniteness; for inexact scalars the smallest eigenvalue
    /// must be at least `-rel_tol * max(1, max |eigenvalue|)`.
    fn sym_psd(m: &SymMatrix<Self>, rel_tol: f64) -> PsdCheck;
}

fn float_rank<T: Float + Scalar>(m: &SymMatrix<T>, rel_tol: f64) -> usize {
    let ev = jacobi_eigenvalues(m);
    let scale = ev.iter().fold(1.0f64, |a, x| a.max(x.to_f64_lossy().abs()));
    ev.iter().filter(|x| x.to_f64_lossy().abs() > rel_tol * scale).count()
}

fn float_psd<T: Float + Scalar>(m: &SymMatrix<T>, rel_tol: f64) -> PsdCheck {
    let ev = jacobi_eigenvalues(m);
    let scale = ev.iter().fold(1.0f64, |a, x| a.max(x.to_f64_lossy().abs()));
    let min = ev.first().map(|x| x.to_f64_lossy()).unwrap_or(0.0);
    let threshold = -rel_tol * scale;
    PsdCheck {
        psd: min >= threshold,
        min_eigenvalue: min,
        threshold,
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            const UNIT_ROUNDOFF: f64 = <$t>::EPSILON as f64 / 2.0;

            fn from_rational(r: &BigRational) -> Self {
                <$t as FromPrimitive>::from_f64(crate::poly::rational_to_f64(r)).expect("finite")
            }

            fn to_f64_lossy(&self) -> f64 {
                ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
            }

            fn is_negligible(&self, tol: f64) -> bool {
                self.to_f64_lossy().abs() <= tol
            }

            fn sqrt_opt(&self) -> Option<Self> {
                (*self >= <$t as Zero>::zero()).then(|| Float::sqrt(*self))
            }

            fn to_text(&self) -> String {
                self.to_string()
            }

            fn parse_text(s: &str) -> Option<Self> {
                s.trim().parse().ok()
            }

            fn sym_rank(m: &SymMatrix<Self>, rel_tol: f64) -> usize {
                float_rank(m, rel_tol)
            }

            fn sym_psd(m: &SymMatrix<Self>, rel_tol: f64) -> PsdCheck {
                float_psd(m, rel_tol)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigFloat {
    const EXACT: bool = false;
    const UNIT_ROUNDOFF: f64 = 1e-39;

    fn from_rational(r: &BigRational) -> Self {
        let num = BigFloat::parse(&r.numer().to_string()).expect("integer literal");
        let den = BigFloat::parse(&r.denom().to_string()).expect("integer literal");
        num / den
    }

    fn to_f64_lossy(&self) -> f64 {
        BigFloat::to_f64(self)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.to_f64_lossy().abs() <= tol
    }

    fn sqrt_opt(&self) -> Option<Self> {
        (!self.is_negative()).then(|| Float::sqrt(*self))
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Option<Self> {
        BigFloat::parse(s.trim())
    }

    fn sym_rank(m: &SymMatrix<Self>, rel_tol: f64) -> usize {
        float_rank(m, rel_tol)
    }

    fn sym_psd(m: &SymMatrix<Self>, rel_tol: f64) -> PsdCheck {
        float_psd(m, rel_tol)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const UNIT_ROUNDOFF: f64 = 0.0;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        crate::poly::rational_to_f64(self)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn sqrt_opt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let (n, d) = (self.numer().sqrt(), self.denom().sqrt());
        let r = BigRational::new(n, d);
        (&r * &r == *self).then_some(r)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Option<Self> {
        crate::poly::parse_rational(s)
    }

    fn sym_rank(m: &SymMatrix<Self>, _rel_tol: f64) -> usize {
        rational_rank(m)
    }

    fn sym_psd(m: &SymMatrix<Self>, _rel_tol: f64) -> PsdCheck {
        let psd = rational_is_psd(m);
        let approx = m.map(|x| x.to_f64_lossy());
        let min = jacobi_eigenvalues(&approx).first().copied().unwrap_or(0.0);
        PsdCheck {
            psd,
            min_eigenvalue: min,
            threshold: 0.0,
        }
    }
}

/// Converts an integer to any scalar.
pub fn from_int<T: Scalar>(k: i64) -> T {
    T::from_rational(&BigRational::from_integer(BigInt::from(k)))
}
