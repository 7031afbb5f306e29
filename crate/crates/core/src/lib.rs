//! Exact arithmetic for semisimple classes of GL^ε_d(q) in even characteristic.
//!
//! The crate covers the field tower GF(2) ⊆ GF(q) ⊆ GF(q^2), polynomial
//! dualities, centralizer shapes and realness of semisimple classes, a torus
//! model for automorphism orders, exact inequality certificates, and a
//! brute-force matrix-group oracle that cross-checks all of it at small sizes.

pub mod autos;
pub mod bounds;
pub mod gf2k;
pub mod oracle;
pub mod polyfield;
pub mod scalar;
pub mod semisimple;

pub use gf2k::{make_field, FieldElement, FieldError, FieldSpec};
pub use polyfield::{Factorization, MonicPoly, PolyError};
pub use scalar::Exact;

/// Signed exact integer.
pub type Int = num_bigint::BigInt;
/// Non-negative exact integer.
pub type Nat = num_bigint::BigUint;
/// Exact rational.
pub type Rational = num_rational::BigRational;

/// Default enumeration budget for brute-force scans.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
