//! Exact coefficient ring, sparse polynomials and rational functions with
//! linear-form denominators.

mod poly;
mod ratfun;
mod scalar;

pub use poly::{unit, LinearForm, LinearMap, Mono, Poly};
pub use ratfun::RatFun;
pub use scalar::{q, qi, Rational, Scalar, ZetaMonomial};
