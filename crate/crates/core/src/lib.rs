//! Singular-value fields `z ↦ s_k(F(z))` of matrix-valued analytic functions.
//!
//! The crate evaluates analytic matrix functions over rectangles and disks,
//! scans the full singular-value tuple on a grid, localizes extrema and runs
//! numerical checks of the maximum and minimum principles for these fields,
//! the block factorizations they imply, and the integral identities linking
//! resolvents and matrix exponentials.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod linalg;
pub mod mfunc;
pub mod principles;
pub mod quadrature;
pub mod sampling;
pub mod spectral;
