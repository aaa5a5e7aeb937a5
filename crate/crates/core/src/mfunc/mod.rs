//! Analytic matrix-valued functions: representation, evaluation, derivatives,
//! Taylor coefficients and the scenario language.

mod calculus;
mod expr;
mod function;
mod parse;
mod region;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::LinalgError;

pub use calculus::{derivative_cauchy, taylor_coefficients, CAUCHY_NODES, MAX_DERIVATIVE_ORDER};
pub use expr::ScalarExpr;
pub use function::MatrixFunction;
pub use parse::{parse_scenario, to_scenario_text, ParseError, ParseErrorKind, Scenario};
pub use region::{Region, Shape, DEFAULT_SEED, MAX_GRID_POINTS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("z = {z} is too close to the spectrum: s_n(A - zI) = {s_min:e}")]
    NearSpectrum { z: Complex64, s_min: f64 },
    #[error("cannot differentiate numerically at z = {z}: domain margin {margin:e}")]
    RadiusCollapse { z: Complex64, margin: f64 },
    #[error("derivative order {0} exceeds the supported maximum")]
    OrderTooHigh(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("conjugating matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
