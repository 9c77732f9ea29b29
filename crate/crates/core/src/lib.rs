//! Extension category algebras, Grothendieck constructions over a
//! precosheaf of algebras, functor cohomology, and desk-scale checks of the
//! LHS spectral sequences attached to them.
//!
//! The ground ring is always a field (`Q` or `F_p`), so that Ext groups can
//! be computed by exact linear algebra.

pub mod cliio;
pub mod coeffsys;
pub mod constructions;
pub mod error;
pub mod exactlin;
pub mod extcheck;
pub mod fdalgebra;
pub mod fincat;
pub mod homengine;
pub mod lhsengine;
pub mod validation;

pub use error::{Error, Result};
