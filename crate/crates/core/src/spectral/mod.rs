//! Resolvents, pencils and exponential families of a fixed matrix.

mod integrals;
mod pseudospectra;
mod resolvent;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::mfunc::FunctionError;
use crate::principles::PrinciplesError;

pub use integrals::{cauchy_exp_reconstruction, exp_halfplane_example, laplace_identity_check, CAUCHY_EXP_NODES, LAPLACE_ORDER};
pub use pseudospectra::{pseudospectra_field, PseudospectraField};
pub use resolvent::{resolvent_derivative_identity, resolvent_extrema_check, DEFAULT_STEP, SPECTRUM_MARGIN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("region comes within {value:e} of the spectrum (at z = {z}); margin must exceed {margin:e}")]
    TouchesSpectrum { z: Complex64, value: f64, margin: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Principles(#[from] PrinciplesError),
}

impl From<FunctionError> for SpectralError {
    fn from(e: FunctionError) -> Self {
        SpectralError::Principles(e.into())
    }
}

impl From<LinalgError> for SpectralError {
    fn from(e: LinalgError) -> Self {
        SpectralError::Principles(e.into())
    }
}
