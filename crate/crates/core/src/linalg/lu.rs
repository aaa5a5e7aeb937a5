//! Partial-pivoting LU: determinant, inverse, cofactor-based adjugate.

use num_complex::Complex64;

use super::{CMatrix, LinalgError};

/// `inverse` refuses matrices with `|det(A)| ≤ SINGULAR_DET·‖A‖_Fⁿ`.
pub const SINGULAR_DET: f64 = 1e-13;

/// Packed `PA = LU` factorization.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Self {
        let n = a.dim();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Self { n, lu, perm, sign }
    }

    pub fn det(&self) -> Complex64 {
        let n = self.n;
        (0..n).fold(Complex64::new(self.sign, 0.0), |acc, i| acc * self.lu[i * n + i])
    }

    /// `ln|det|`, `-inf` for an exactly singular factor.
    pub fn log_abs_det(&self) -> f64 {
        let n = self.n;
        (0..n).map(|i| self.lu[i * n + i].norm().ln()).sum()
    }

    fn is_exactly_singular(&self) -> bool {
        (0..self.n).any(|i| self.lu[i * self.n + i] == Complex64::new(0.0, 0.0))
    }

    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.is_exactly_singular() {
            return None;
        }
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[i * n + i];
        }
        Some(x)
    }

    /// Inverse by column solves; `None` only for an exactly zero pivot.
    pub fn inverse(&self) -> Option<CMatrix> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            cols.push(self.solve(&e)?);
        }
        Some(CMatrix::from_columns(&cols))
    }
}

pub fn det(a: &CMatrix) -> Complex64 {
    Lu::new(a).det()
}

/// Inverse by pivoted elimination, gated by the scaled determinant test.
pub fn inverse(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    let n = a.dim();
    let lu = Lu::new(a);
    let fro = a.frobenius_norm();
    let log_det = lu.log_abs_det();
    let log_threshold = SINGULAR_DET.ln() + n as f64 * fro.ln();
    if fro == 0.0 || !(log_det > log_threshold) {
        return Err(LinalgError::Singular {
            det_abs: log_det.exp(),
            threshold: log_threshold.exp(),
        });
    }
    lu.inverse().ok_or(LinalgError::Singular {
        det_abs: 0.0,
        threshold: log_threshold.exp(),
    })
}

/// Transpose of the cofactor matrix, from minor determinants.
///
/// Costs O(n⁵); meant for small cross-checks and for singular inputs where
/// `det(A)·A⁻¹` is unavailable.
pub fn adjugate(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    if n == 1 {
        return CMatrix::identity(1);
    }
    let mut adj = CMatrix::zeros(n);
    let mut minor = vec![Complex64::new(0.0, 0.0); (n - 1) * (n - 1)];
    for i in 0..n {
        for j in 0..n {
            let mut idx = 0;
            for r in (0..n).filter(|&r| r != i) {
                for c in (0..n).filter(|&c| c != j) {
                    minor[idx] = a[(r, c)];
                    idx += 1;
                }
            }
            let m = CMatrix::from_vec(n - 1, minor.clone()).expect("minor of a valid matrix");
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[(j, i)] = det(&m) * sign;
        }
    }
    adj
}
