//! Extension of an orthonormal family to a unitary matrix with Householder
//! reflections.

use num_complex::Complex64;

use super::{vec_norm, CMatrix, LinalgError, VectorBasis};

/// Inputs must be orthonormal to this accuracy.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Unitary matrix whose first `k` columns are the basis vectors.
pub fn unitary_completion(basis: &VectorBasis) -> Result<CMatrix, LinalgError> {
    let n = basis.ambient_dim().ok_or(LinalgError::Empty)?;
    if basis.len() > n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: basis.len(),
        });
    }
    if basis.residual() > ORTHONORMAL_TOL {
        return Err(LinalgError::NotOrthonormal {
            residual: basis.residual(),
        });
    }
    Ok(complete_columns(n, basis.columns()))
}

/// Same as [`unitary_completion`] without the precondition checks. An empty
/// family completes to the identity.
pub(crate) fn complete_columns(n: usize, cols: &[Vec<Complex64>]) -> CMatrix {
    let k = cols.len();
    let mut work: Vec<Vec<Complex64>> = cols.to_vec();
    let mut reflectors: Vec<(usize, Vec<Complex64>, f64)> = Vec::with_capacity(k);
    let mut diag = vec![Complex64::new(1.0, 0.0); n];

    for j in 0..k {
        let x: Vec<Complex64> = work[j][j..].to_vec();
        let xnorm = vec_norm(&x);
        let lead = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -lead * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vv > 0.0 {
            for col in work.iter_mut().skip(j) {
                reflect(&mut col[j..], &v, vv);
            }
        }
        // The reduced column is alpha·e_j; keep its unit phase.
        diag[j] = if xnorm > 0.0 { alpha / xnorm } else { Complex64::new(1.0, 0.0) };
        reflectors.push((j, v, vv));
    }

    let mut m = CMatrix::from_diag(&diag);
    let mut cols_m: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    for (j, v, vv) in reflectors.iter().rev() {
        if *vv == 0.0 {
            continue;
        }
        for col in cols_m.iter_mut() {
            reflect(&mut col[*j..], v, *vv);
        }
    }
    m = CMatrix::from_columns(&cols_m);
    m
}

/// `x ← (I − 2vv*/v*v)·x`.
fn reflect(x: &mut [Complex64], v: &[Complex64], vv: f64) {
    let dot: Complex64 = v.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
    let f = dot * (2.0 / vv);
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}
