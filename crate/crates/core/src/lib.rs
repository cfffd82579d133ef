//! Exact verification of q-supercongruences modulo powers of cyclotomic
//! polynomials.
//!
//! The layers build on each other: dense polynomials ([`poly`]) and canonical
//! rational functions ([`ratfunc`]), cyclotomic polynomials ([`cyclotomic`]),
//! symbolic q-products ([`qseries`]), congruence decisions ([`congruence`]),
//! and the registry of named checks ([`checks`]).

pub mod checks;
pub mod congruence;
pub mod cyclotomic;
pub mod poly;
pub mod qseries;
pub mod ratfunc;
pub mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use cyclotomic::{cyclotomic, cyclotomic_oracle, CyclotomicCache, FrozenCyclotomics};
pub use poly::{Degree, Poly, PolyError};
pub use qseries::{MonomialParam, QProduct, Sign};
pub use ratfunc::RatFunc;
pub use scalar::{FieldScalar, Scalar};

/// Polynomials with arbitrary-precision integer coefficients.
pub type IntPoly = Poly<BigInt>;
/// Polynomials with exact rational coefficients.
pub type RatPoly = Poly<BigRational>;
/// Exact rationals.
pub type Rational = BigRational;
