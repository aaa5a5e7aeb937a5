//! Dense complex matrix kernel.

mod expm;
mod householder;
mod lu;
mod matrix;
mod svd;

use num_complex::Complex64;
use thiserror::Error;

pub use expm::matrix_exp;
pub use householder::{unitary_completion, ORTHONORMAL_TOL};
pub use lu::{adjugate, det, inverse, Lu, SINGULAR_DET};
pub use matrix::{inner, vec_norm, CMatrix, MAX_DIM};
pub(crate) use svd::maximizing_subspace_from;
pub use svd::{maximizing_subspace, minimizing_vector, operator_norm, singular_values, svd, Svd};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix has no rows")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("dimension {0} exceeds the cap of {MAX_DIM}")]
    TooLarge(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Jacobi SVD did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("maximizing direction is undefined for the zero matrix")]
    ZeroMatrix,
    #[error("vectors are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("matrix is numerically singular: |det| = {det_abs:e} <= {threshold:e}")]
    Singular { det_abs: f64, threshold: f64 },
}

/// Ordered family of vectors in ℂⁿ together with its orthonormality residual
/// `max |⟨xᵢ, xⱼ⟩ − δᵢⱼ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBasis {
    columns: Vec<Vec<Complex64>>,
    residual: f64,
}

impl VectorBasis {
    pub fn new(columns: Vec<Vec<Complex64>>) -> Self {
        if let Some(first) = columns.first() {
            assert!(columns.iter().all(|c| c.len() == first.len()), "ragged basis");
        }
        let mut residual: f64 = 0.0;
        for (i, x) in columns.iter().enumerate() {
            for (j, y) in columns.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((inner(x, y) - target).norm());
            }
        }
        Self { columns, residual }
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Length of the vectors, if there are any.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.columns.first().map(Vec::len)
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}
