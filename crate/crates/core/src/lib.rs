//! Exact construction of the semi-infinite Weil complex of a loop algebra,
//! the superconformal operator families acting on it, and finite-box
//! verification of their relations and cohomology.
//!
//! Everything is computed over the Gaussian rationals; no value is ever
//! rounded.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod fieldops;
pub mod fock;
pub mod linalg;
pub mod report;
pub mod sca;
pub mod suite;
pub mod verify;

pub use algebra::{GradedBackend, LieAlgebraSpec, SCAParams, Scalar};
pub use error::{Error, Result};
pub use fock::{Family, FockMonomial, FockVector, GenKey};
