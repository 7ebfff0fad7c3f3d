//! Scalars, finite-dimensional Lie algebras and graded backends.

mod backend;
mod lie;
mod scalar;

pub use backend::{backend_bracket, GradedBackend, Operand, SCAParams};
pub use lie::{
    builtin_sl2_orthonormal, check_invariant_form, check_jacobi, LieAlgebraSpec,
    VerificationReport,
};
pub use scalar::Scalar;
