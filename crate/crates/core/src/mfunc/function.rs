use num_complex::Complex64;

use super::{FunctionError, ScalarExpr};
use crate::linalg::{matrix_exp, singular_values, CMatrix, Lu, LinalgError, MAX_DIM};

/// Unitarity tolerance for conjugating matrices.
pub const UNITARY_TOL: f64 = 1e-10;

/// Relative distance to the spectrum below which a resolvent is not evaluated.
pub const SPECTRUM_EPS: f64 = 1e-12;

/// An analytic function `F: Ω → M_n` in one of a few closed-form representations.
///
/// Use the checked constructors; evaluation assumes the blocks are
/// dimensionally consistent.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFunction {
    /// Row-major grid of scalar expressions.
    Entrywise { n: usize, entries: Vec<ScalarExpr> },
    /// `Σ C_k (z − center)^k`; `radius` is recorded but not enforced.
    Taylor {
        center: Complex64,
        coeffs: Vec<CMatrix>,
        radius: f64,
    },
    /// `z ↦ A − zI`.
    Pencil(CMatrix),
    /// `z ↦ (A − zI)⁻¹`.
    Resolvent(CMatrix),
    /// `z ↦ exp(zA)`.
    ExpFamily(CMatrix),
    BlockDiag(Vec<MatrixFunction>),
    /// `z ↦ U·F(z)·V`.
    UnitaryConjugate {
        u: CMatrix,
        inner: Box<MatrixFunction>,
        v: CMatrix,
    },
    /// Square diagonal block `F(z)[start.., start..]` of size `size`.
    Principal {
        inner: Box<MatrixFunction>,
        start: usize,
        size: usize,
    },
}

impl MatrixFunction {
    pub fn entrywise(n: usize, entries: Vec<ScalarExpr>) -> Result<Self, FunctionError> {
        if n == 0 || n > MAX_DIM {
            return Err(LinalgError::TooLarge(n).into());
        }
        if entries.len() != n * n {
            return Err(FunctionError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(MatrixFunction::Entrywise { n, entries })
    }

    /// Constant function with value `m`.
    pub fn constant(m: &CMatrix) -> Self {
        MatrixFunction::Entrywise {
            n: m.dim(),
            entries: m.as_slice().iter().map(|&c| ScalarExpr::constant(c)).collect(),
        }
    }

    pub fn taylor(center: Complex64, coeffs: Vec<CMatrix>, radius: f64) -> Result<Self, FunctionError> {
        let n = coeffs.first().map(CMatrix::dim).ok_or(LinalgError::Empty)?;
        if let Some(bad) = coeffs.iter().find(|c| c.dim() != n) {
            return Err(FunctionError::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        if !(radius > 0.0) {
            return Err(FunctionError::InvalidRegion(format!("Taylor radius {radius} must be positive")));
        }
        Ok(MatrixFunction::Taylor { center, coeffs, radius })
    }

    pub fn block_diag(blocks: Vec<MatrixFunction>) -> Result<Self, FunctionError> {
        if blocks.is_empty() {
            return Err(LinalgError::Empty.into());
        }
        let n: usize = blocks.iter().map(MatrixFunction::dim).sum();
        if n > MAX_DIM {
            return Err(LinalgError::TooLarge(n).into());
        }
        Ok(MatrixFunction::BlockDiag(blocks))
    }

    pub fn unitary_conjugate(u: CMatrix, inner: MatrixFunction, v: CMatrix) -> Result<Self, FunctionError> {
        let n = inner.dim();
        for m in [&u, &v] {
            if m.dim() != n {
                return Err(FunctionError::DimensionMismatch {
                    expected: n,
                    found: m.dim(),
                });
            }
            let residual = m.unitarity_residual();
            if !(residual <= UNITARY_TOL) {
                return Err(FunctionError::NotUnitary { residual });
            }
        }
        Ok(MatrixFunction::UnitaryConjugate {
            u,
            inner: Box::new(inner),
            v,
        })
    }

    pub fn principal(inner: MatrixFunction, start: usize, size: usize) -> Result<Self, FunctionError> {
        let n = inner.dim();
        if size == 0 || start + size > n {
            return Err(FunctionError::DimensionMismatch {
                expected: n,
                found: start + size,
            });
        }
        Ok(MatrixFunction::Principal {
            inner: Box::new(inner),
            start,
            size,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            MatrixFunction::Entrywise { n, .. } => *n,
            MatrixFunction::Taylor { coeffs, .. } => coeffs[0].dim(),
            MatrixFunction::Pencil(a) | MatrixFunction::Resolvent(a) | MatrixFunction::ExpFamily(a) => a.dim(),
            MatrixFunction::BlockDiag(blocks) => blocks.iter().map(MatrixFunction::dim).sum(),
            MatrixFunction::UnitaryConjugate { inner, .. } => inner.dim(),
            MatrixFunction::Principal { size, .. } => *size,
        }
    }

    /// Whether any part of the representation can fail to evaluate.
    pub fn has_singularities(&self) -> bool {
        match self {
            MatrixFunction::Resolvent(_) => true,
            MatrixFunction::BlockDiag(blocks) => blocks.iter().any(MatrixFunction::has_singularities),
            MatrixFunction::UnitaryConjugate { inner, .. } | MatrixFunction::Principal { inner, .. } => {
                inner.has_singularities()
            }
            _ => false,
        }
    }

    /// The underlying matrix for the single-matrix families.
    pub fn base_matrix(&self) -> Option<&CMatrix> {
        match self {
            MatrixFunction::Pencil(a) | MatrixFunction::Resolvent(a) | MatrixFunction::ExpFamily(a) => Some(a),
            _ => None,
        }
    }

    /// True when some Taylor part is evaluated outside its recorded radius.
    pub fn beyond_radius(&self, z: Complex64) -> bool {
        match self {
            MatrixFunction::Taylor { center, radius, .. } => (z - center).norm() > *radius,
            MatrixFunction::BlockDiag(blocks) => blocks.iter().any(|b| b.beyond_radius(z)),
            MatrixFunction::UnitaryConjugate { inner, .. } | MatrixFunction::Principal { inner, .. } => {
                inner.beyond_radius(z)
            }
            _ => false,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<CMatrix, FunctionError> {
        match self {
            MatrixFunction::Entrywise { n, entries } => {
                Ok(CMatrix::from_vec(*n, entries.iter().map(|e| e.eval(z)).collect())?)
            }
            MatrixFunction::Taylor { center, coeffs, .. } => {
                let w = z - center;
                let mut acc = coeffs[coeffs.len() - 1].clone();
                for c in coeffs.iter().rev().skip(1) {
                    acc = &acc.scale(w) + c;
                }
                finite(acc)
            }
            MatrixFunction::Pencil(a) => Ok(a.shift(-z)),
            MatrixFunction::Resolvent(a) => resolvent(a, z),
            MatrixFunction::ExpFamily(a) => finite(matrix_exp(&a.scale(z))),
            MatrixFunction::BlockDiag(blocks) => {
                let parts = blocks.iter().map(|b| b.eval(z)).collect::<Result<Vec<_>, _>>()?;
                Ok(CMatrix::block_diag(&parts))
            }
            MatrixFunction::UnitaryConjugate { u, inner, v } => Ok(&(u * &inner.eval(z)?) * v),
            MatrixFunction::Principal { inner, start, size } => Ok(inner.eval(z)?.principal_block(*start, *size)),
        }
    }

    /// Exact `k`-th derivative, built from each representation's closed form.
    pub fn derivative(&self, z: Complex64, k: usize) -> Result<CMatrix, FunctionError> {
        if k == 0 {
            return self.eval(z);
        }
        if k > super::MAX_DERIVATIVE_ORDER {
            return Err(FunctionError::OrderTooHigh(k));
        }
        let n = self.dim();
        match self {
            MatrixFunction::Entrywise { n, entries } => Ok(CMatrix::from_vec(
                *n,
                entries.iter().map(|e| e.nth_derivative(k).eval(z)).collect(),
            )?),
            MatrixFunction::Taylor { center, coeffs, .. } => {
                let w = z - center;
                let mut acc = CMatrix::zeros(n);
                let mut wpow = Complex64::new(1.0, 0.0);
                for (j, c) in coeffs.iter().enumerate().skip(k) {
                    let falling: f64 = ((j - k + 1)..=j).map(|m| m as f64).product();
                    acc = &acc + &c.scale(wpow * falling);
                    wpow *= w;
                }
                finite(acc)
            }
            MatrixFunction::Pencil(_) => Ok(if k == 1 {
                CMatrix::identity(n).scale_real(-1.0)
            } else {
                CMatrix::zeros(n)
            }),
            MatrixFunction::Resolvent(a) => {
                // R^(k) = k!·R^(k+1)
                let r = resolvent(a, z)?;
                let fact: f64 = (1..=k).map(|m| m as f64).product();
                finite(r.powi(k as u32 + 1).scale_real(fact))
            }
            MatrixFunction::ExpFamily(a) => finite(&a.powi(k as u32) * &matrix_exp(&a.scale(z))),
            MatrixFunction::BlockDiag(blocks) => {
                let parts = blocks
                    .iter()
                    .map(|b| b.derivative(z, k))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CMatrix::block_diag(&parts))
            }
            MatrixFunction::UnitaryConjugate { u, inner, v } => Ok(&(u * &inner.derivative(z, k)?) * v),
            MatrixFunction::Principal { inner, start, size } => {
                Ok(inner.derivative(z, k)?.principal_block(*start, *size))
            }
        }
    }

    /// Lower bound on the distance from `z` to the edge of the domain of analyticity.
    pub fn domain_margin(&self, z: Complex64) -> Result<f64, FunctionError> {
        match self {
            MatrixFunction::Resolvent(a) => {
                // s_n(A − zI) ≤ |λ − z| for every eigenvalue λ.
                let s = singular_values(&a.shift(-z))?;
                Ok(s[s.len() - 1])
            }
            MatrixFunction::BlockDiag(blocks) => blocks
                .iter()
                .map(|b| b.domain_margin(z))
                .try_fold(f64::INFINITY, |m, d| d.map(|d| m.min(d))),
            MatrixFunction::UnitaryConjugate { inner, .. } | MatrixFunction::Principal { inner, .. } => {
                inner.domain_margin(z)
            }
            _ => Ok(f64::INFINITY),
        }
    }

    /// Short human-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            MatrixFunction::Entrywise { .. } => "entrywise",
            MatrixFunction::Taylor { .. } => "taylor",
            MatrixFunction::Pencil(_) => "pencil",
            MatrixFunction::Resolvent(_) => "resolvent",
            MatrixFunction::ExpFamily(_) => "expz",
            MatrixFunction::BlockDiag(_) => "blockdiag",
            MatrixFunction::UnitaryConjugate { .. } => "conj",
            MatrixFunction::Principal { .. } => "block",
        }
    }
}

fn finite(m: CMatrix) -> Result<CMatrix, FunctionError> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(LinalgError::NonFinite.into())
    }
}

fn resolvent(a: &CMatrix, z: Complex64) -> Result<CMatrix, FunctionError> {
    let pencil = a.shift(-z);
    let s = singular_values(&pencil)?;
    let s_min = s[s.len() - 1];
    let scale = 1.0 + singular_values(a)?[0];
    if s_min <= SPECTRUM_EPS * scale {
        return Err(FunctionError::NearSpectrum { z, s_min });
    }
    // The distance gate above is the singularity test; the determinant gate of
    // `linalg::inverse` would reject well-conditioned pencils with small entries.
    let inv = Lu::new(&pencil)
        .inverse()
        .ok_or(FunctionError::NearSpectrum { z, s_min })?;
    finite(inv)
}
