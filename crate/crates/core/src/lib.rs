//! Dirac 4-spinors in the standard, helicity and chiral-helicity spin
//! bases, the change of basis between them, the classical discrete
//! symmetries P, C and CP, and a finite-mode Fock-space realization of a
//! helicity-flipping parity operator.
//!
//! Every identity the constructions are supposed to satisfy is exposed as a
//! check returning a [`CheckResult`], so the library doubles as a numerical
//! verification harness (see [`suite`]).

pub mod algebra;
pub mod check;
pub mod discrete;
pub mod error;
pub mod fock;
pub mod spinors;
pub mod suite;
pub mod transform;

pub use check::CheckResult;
pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
pub type Matrix2 = nalgebra::Matrix2<C64>;
pub type Matrix4 = nalgebra::Matrix4<C64>;
pub type Vector2 = nalgebra::Vector2<C64>;
pub type Vector4 = nalgebra::Vector4<C64>;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry modulus of a matrix-like iterator; the residual norm used
/// by all matrix identity checks.
pub(crate) fn max_abs<'a>(entries: impl IntoIterator<Item = &'a C64>) -> f64 {
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}
