//! Certified spectral radii of small graphs, finite forbidden-subgraph
//! characterizations of graphs with bounded spectral radius, the spectral
//! radius order, and equiangular-line constructions and bounds.
//!
//! Matrix and code routines are generic over [`scalar::Scalar`]:
//! `f32`, `f64`, [`BigFloat`] and [`Rational`].

pub mod graphkit;
pub mod poly;
pub mod linalg;
pub mod scalar;
pub mod algnum;
pub mod spectra;
pub mod forbidden;
pub mod order;
pub mod lines;

pub use num_bigfloat::BigFloat;

pub use algnum::AlgebraicReal;
pub use graphkit::Graph;
pub use linalg::SymMatrix;
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Symmetric matrices over the supported scalars.
pub type SymMatrixQ = SymMatrix<Rational>;
pub type SymMatrixF = SymMatrix<f64>;
pub type SymMatrixF32 = SymMatrix<f32>;
pub type SymMatrixBig = SymMatrix<BigFloat>;

/// Spherical codes over the supported scalars.
pub type CodeQ = lines::SphericalCode<Rational>;
pub type CodeF = lines::SphericalCode<f64>;
pub type CodeBig = lines::SphericalCode<BigFloat>;
