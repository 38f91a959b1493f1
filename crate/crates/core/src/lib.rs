//! Exact model of a one-parameter nonexpansive semigroup on a set `C` of
//! functions over `Ω = {-1} ∪ [0, ∞)`, restricted to rational piecewise-linear data.
//!
//! The orbit of the zero function has time averages converging to `0` in the
//! sup norm even though `0` is moved by the semigroup. Everything here is exact:
//! function equality is structural equality of canonical forms.

pub mod cesaro;
pub mod cli;
pub mod error;
pub mod pl;
pub mod pl_function;
pub mod quadratic;
pub mod rational;
pub mod semigroup;
pub mod verify;

pub use error::{Error, Result};
pub use pl::{Pl, Vertex};
pub use pl_function::{canonicalize, CMembership, OmegaFn};
pub use rational::Rational;
