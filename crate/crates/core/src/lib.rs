//! Exact Gröbner bases over Laurent polynomial rings and polytopal affinoid algebras,
//! under generalized monomial orders attached to conic decompositions of `Z^n`.

pub mod affinoid;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod gmo;
pub mod groebner;
pub mod laurent;
pub mod lattice;
pub mod oracle;
pub mod reduction;
pub mod text;

pub use error::{Error, Result};
