//! Singular-value fields over a region and numerical checks of the maximum
//! and minimum principles they satisfy.

mod constancy;
mod extremum;
mod factorization;
mod field;
mod max_direction;
mod mean_value;
pub mod nelder_mead;
mod report;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::mfunc::FunctionError;

pub use constancy::{check_min_principle, constancy_report};
pub use extremum::{
    interior_extremum, interior_frobenius_extremum, interior_scalar, locate_extremum, locate_scalar, ExtremumKind,
    ExtremumReport, REFINE_MAX_ITER,
};
pub use factorization::{check_factorization, factorize_at_max, iterated_factorization, Factorization, IteratedFactorization};
pub use field::{scan_field, SingularField};
pub use max_direction::check_max_direction;
pub use mean_value::check_mean_value_identity;
pub use report::{Complex, Residual, Value, Verdict, VerificationReport};

/// Relative gap used to read off the multiplicity of the top singular value.
pub const DEFAULT_TAU: f64 = 1e-8;
/// Pseudo-random interior points used to verify factorizations and directions.
pub const DEFAULT_SAMPLES: usize = 64;
/// Derivative orders checked by the maximizing-direction test.
pub const DEFAULT_DERIVATIVE_ORDERS: usize = 6;
/// Slack for "z₀ is a maximum of the s₁ field", relative to `max(1, s₁)`.
pub const MAX_SLACK: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrinciplesError {
    #[error("every grid point is singular")]
    EmptyDomain,
    #[error(
        "z0 = {z0} is not a maximum of s1: s1(z0) = {value}, but s1 = {witness_value} at {witness}"
    )]
    NotAMaximum {
        z0: Complex64,
        value: f64,
        witness: Complex64,
        witness_value: f64,
    },
    #[error("factorization residual {residual:e} exceeds {tolerance:e} at {witness}")]
    FactorizationFailed {
        residual: f64,
        tolerance: f64,
        witness: Complex64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

impl From<LinalgError> for PrinciplesError {
    fn from(e: LinalgError) -> Self {
        PrinciplesError::Function(e.into())
    }
}
