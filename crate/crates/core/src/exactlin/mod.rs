//! Exact linear algebra over prime fields and the rationals.
//!
//! Everything above this module is computed through [`Matrix`] and
//! [`Subspace`]; there is no floating point and no tolerance anywhere.

mod field;
mod finite;
mod matrix;
mod subspace;

pub use field::{is_prime, Field, FieldSpec, PrimeField, Rationals};
pub use finite::{FiniteSpace, MAX_CARRIER};
pub use matrix::Matrix;
pub use subspace::{Quotient, Subspace};
