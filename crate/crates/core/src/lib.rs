//! Exact arithmetic invariants of singular K3 surfaces with complex
//! multiplication by the maximal order of an imaginary quadratic field.

pub mod abelian;
pub mod arith;
pub mod error;
pub mod format;
pub mod k3type;
pub mod lattice;
pub mod matrix;
pub mod quadfield;
pub mod rayclass;
pub mod survey;

pub use abelian::{FiniteAbelianGroup, Subgroup};
pub use arith::{Limits, Rational};
pub use error::{Error, ErrorClass, Result};
