//! Catalytic state transformations in the resource theory of thermodynamics.
//!
//! The crate builds the optimal embezzling catalyst family for trivial
//! Hamiltonians, certifies its optimality with an exact rational LP, checks
//! majorization and Rényi-divergence conditions, and evaluates lower bounds
//! on catalytic error under dimension and energy constraints.

pub mod bounds;
pub mod catalysts;
pub mod divergences;
pub mod error;
pub mod hamiltonians;
pub mod linalg;
pub mod oracle;
pub mod repro;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use spectra::{CatalystPair, ProbVec};
