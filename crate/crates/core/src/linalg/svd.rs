//! Complex singular value decomposition by one-sided Jacobi rotations.
//!
//! The working matrix `B = A·W` is driven towards mutually orthogonal
//! columns by plane rotations chosen from the 2×2 Hermitian Gram block of
//! each column pair. On convergence the column norms are the singular values,
//! the normalized columns are the left singular vectors and `W` holds the
//! right singular vectors, so that `A = U·diag(S)·V` with `V = W*`.

use num_complex::Complex64;

use super::householder::complete_columns;
use super::{inner, vec_norm, CMatrix, LinalgError, VectorBasis};

const MAX_SWEEPS: usize = 30;
/// Off-diagonal Gram entries below `CONVERGED_OFF·‖A‖_F²` count as converged.
const CONVERGED_OFF: f64 = 1e-14;
/// Relative ties when picking the component that fixes a singular vector's phase.
const PHASE_TIE: f64 = 1e-12;

/// `A = U·diag(S)·V`; `V` already carries the adjoint, so the right singular
/// vectors are the conjugated rows of `V`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn dim(&self) -> usize {
        self.s.len()
    }

    /// Right singular vector `k` (0-based), i.e. column `k` of `V*`.
    pub fn right_vector(&self, k: usize) -> Vec<Complex64> {
        self.v.row(k).iter().map(|c| c.conj()).collect()
    }

    pub fn left_vector(&self, k: usize) -> Vec<Complex64> {
        self.u.column(k)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut us = self.u.clone();
        for i in 0..n {
            for j in 0..n {
                us[(i, j)] *= self.s[j];
            }
        }
        &us * &self.v
    }
}

pub fn svd(a: &CMatrix) -> Result<Svd, LinalgError> {
    let n = a.dim();
    let norm_f2 = a.frobenius_norm().powi(2);
    if norm_f2 == 0.0 {
        return Ok(Svd {
            u: CMatrix::identity(n),
            s: vec![0.0; n],
            v: CMatrix::identity(n),
        });
    }

    let mut b: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut w: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let rel_tol = f64::EPSILON * n as f64;
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = b[p].iter().map(|c| c.norm_sqr()).sum::<f64>();
                let beta = b[q].iter().map(|c| c.norm_sqr()).sum::<f64>();
                let gamma = inner(&b[p], &b[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= rel_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 { 1.0 } else { -1.0 } / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut b, p, q, c, s, phase);
                rotate(&mut w, p, q, c, s, phase);
            }
        }
        converged = !rotated;
    }
    if !converged {
        let off = max_offdiag_gram(&b);
        if off > CONVERGED_OFF * norm_f2 {
            return Err(LinalgError::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_diagonal: off,
            });
        }
    }

    let norms: Vec<f64> = b.iter().map(|col| vec_norm(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut right: Vec<Vec<Complex64>> = order.iter().map(|&j| w[j].clone()).collect();

    // Left vectors: normalized columns, re-orthogonalized so U stays unitary
    // even when small singular values leave the normalized columns noisy.
    let mut left: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(n);
    let mut accepted: Vec<Vec<Complex64>> = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        if s[k] == 0.0 {
            left.push(None);
            continue;
        }
        let mut u: Vec<Complex64> = b[j].iter().map(|c| c / s[k]).collect();
        for _ in 0..2 {
            for prev in &accepted {
                let proj = inner(prev, &u);
                for (ui, pi) in u.iter_mut().zip(prev) {
                    *ui -= proj * pi;
                }
            }
        }
        let nu = vec_norm(&u);
        if nu < 0.5 {
            left.push(None);
            continue;
        }
        for ui in u.iter_mut() {
            *ui /= nu;
        }
        accepted.push(u.clone());
        left.push(Some(u));
    }
    let left: Vec<Vec<Complex64>> = if accepted.len() < n {
        let full = complete_columns(n, &accepted);
        let mut fill = (accepted.len()..n).map(|j| full.column(j));
        left.into_iter()
            .map(|u| u.unwrap_or_else(|| fill.next().expect("completion has n columns")))
            .collect()
    } else {
        left.into_iter().map(|u| u.expect("all accepted")).collect()
    };
    let mut left = left;

    for k in 0..n {
        let phase = phase_fix(&right[k]);
        for x in right[k].iter_mut() {
            *x *= phase;
        }
        for x in left[k].iter_mut() {
            *x *= phase;
        }
    }

    let u = CMatrix::from_columns(&left);
    let v = CMatrix::from_columns(&right).adjoint();
    Ok(Svd { u, s, v })
}

/// Unit scalar that makes the first largest-modulus component real positive.
fn phase_fix(x: &[Complex64]) -> Complex64 {
    let max = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let pivot = x
        .iter()
        .find(|c| c.norm() >= max * (1.0 - PHASE_TIE))
        .expect("max is attained");
    pivot.conj() / pivot.norm()
}

fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    let pc = phase.conj();
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let bp = *xp;
        let bq = *xq * pc;
        *xp = bp * c - bq * s;
        *xq = bp * s + bq * c;
    }
}

fn max_offdiag_gram(cols: &[Vec<Complex64>]) -> f64 {
    let mut off: f64 = 0.0;
    for p in 0..cols.len() {
        for q in (p + 1)..cols.len() {
            off = off.max(inner(&cols[p], &cols[q]).norm());
        }
    }
    off
}

pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(svd(a)?.s)
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> Result<f64, LinalgError> {
    Ok(svd(a)?.s[0])
}

/// Orthonormal basis of the right singular vectors whose singular values are
/// within the relative tolerance `tau` of the largest one.
pub fn maximizing_subspace(a: &CMatrix, tau: f64) -> Result<VectorBasis, LinalgError> {
    maximizing_subspace_from(&svd(a)?, tau)
}

pub(crate) fn maximizing_subspace_from(dec: &Svd, tau: f64) -> Result<VectorBasis, LinalgError> {
    let s1 = dec.s[0];
    if s1 == 0.0 {
        return Err(LinalgError::ZeroMatrix);
    }
    let d = dec.s.iter().take_while(|&&sk| sk >= s1 * (1.0 - tau)).count();
    Ok(VectorBasis::new((0..d).map(|k| dec.right_vector(k)).collect()))
}

/// Unit vector `x` minimizing `‖Ax‖`; the last right singular vector.
pub fn minimizing_vector(a: &CMatrix) -> Result<Vec<Complex64>, LinalgError> {
    let dec = svd(a)?;
    Ok(dec.right_vector(dec.dim() - 1))
}
