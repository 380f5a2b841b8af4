//! Exact arithmetic: fields, polynomials, resultants and integer predicates.

pub mod arith;
pub mod field;
pub mod poly;
pub mod resultant;

pub use arith::{is_square, is_squarefree, primes_up_to};
pub use field::{Field, PrimeField, QuadraticExtension, Rationals};
pub use poly::{Poly, PolyRing};
pub use resultant::{discriminant, resultant};

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;
