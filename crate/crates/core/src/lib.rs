//! Zeta-dimension of sets of positive integers and lattice points.
//!
//! The zeta-dimension of `A` is the abscissa of convergence of
//! `ζ_A(s) = Σ_{n∈A} n^{-s}`. It equals the exponential growth rate of
//! `|A ∩ [1, 2ⁿ]|`, which is what most of this crate measures.

pub mod algebra;
pub mod closed_form;
pub mod count;
pub mod error;
pub mod estimators;
pub mod family;
pub mod gales;
pub mod generators;
pub mod io;
pub mod numeric;
pub mod set;
pub mod verify;

pub use count::{block_profile, count_range, zeta_partial, CountProfile, NormKind, SetRef, ZetaPartial};
pub use error::{Result, ZetaError};
pub use set::{Budget, IntegerSet, IntegerSource, LatticePointSet};
