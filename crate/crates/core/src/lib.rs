//! Exact workbench for unital lattice-ordered groups of continuous
//! piecewise-linear functions on rational polytopes, and their projectable
//! hulls.
//!
//! All arithmetic is exact. The numeric core is generic over [`Scalar`]; the
//! aliases at the crate root fix the scalar to [`BigRational`].

pub mod boolalg;
pub mod curvetrace;
pub mod error;
pub mod freudenthal;
pub mod gen;
pub mod geometry;
pub mod hull;
pub mod plfun;
pub mod scalar;
pub mod term;

pub use error::{Error, ParseError, Result};
pub use num_rational::BigRational;
pub use scalar::Scalar;

/// The default exact scalar.
pub type Q = BigRational;

pub type Term = term::Term<Q>;
pub type Domain = geometry::Domain<Q>;
pub type Arrangement = geometry::Arrangement<Q>;
pub type Affine = geometry::Affine<Q>;
pub type Hyperplane = geometry::Hyperplane<Q>;
pub type PlFunction = plfun::PlFunction<Q>;
pub type RcSet = boolalg::RcSet<Q>;
pub type HullElement = hull::HullElement<Q>;
pub type StepElement = freudenthal::StepElement<Q>;
