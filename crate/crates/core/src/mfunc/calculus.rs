use std::f64::consts::PI;

use num_complex::Complex64;

use super::{FunctionError, MatrixFunction};
use crate::linalg::CMatrix;

pub const MAX_DERIVATIVE_ORDER: usize = 12;

/// Default node count for contour differentiation.
pub const CAUCHY_NODES: usize = 64;

const MIN_CONTOUR_RADIUS: f64 = 1e-6;

/// Trapezoid rule for `(1/2πi)∮ F(ξ)(ξ − center)^{−k−1} dξ` on `|ξ − center| = r`,
/// for every `k` in `0..=max_k` at once.
fn contour_moments(
    f: &MatrixFunction,
    center: Complex64,
    r: f64,
    max_k: usize,
    nodes: usize,
) -> Result<Vec<CMatrix>, FunctionError> {
    let n = f.dim();
    let mut out = vec![CMatrix::zeros(n); max_k + 1];
    for j in 0..nodes {
        let w = Complex64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64);
        let value = f.eval(center + w)?;
        let winv = w.inv();
        let mut weight = Complex64::new(1.0 / nodes as f64, 0.0);
        for c in out.iter_mut() {
            *c = &*c + &value.scale(weight);
            weight *= winv;
        }
    }
    Ok(out)
}

/// Taylor coefficients `C_0..=C_K` about `z0` from a circle of radius `r`.
///
/// Uses `max(256, 8K)` trapezoid nodes, which is spectrally accurate when the
/// closed disk lies inside the domain.
pub fn taylor_coefficients(
    f: &MatrixFunction,
    z0: Complex64,
    k_max: usize,
    r: f64,
) -> Result<Vec<CMatrix>, FunctionError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(FunctionError::RadiusCollapse { z: z0, margin: r });
    }
    contour_moments(f, z0, r, k_max, 256.max(8 * k_max))
}

/// `k`-th derivative by contour quadrature, independent of the closed forms
/// used by [`MatrixFunction::derivative`].
///
/// The default radius is half the domain margin at `z`, capped at 1.
pub fn derivative_cauchy(
    f: &MatrixFunction,
    z: Complex64,
    k: usize,
    radius: Option<f64>,
    nodes: usize,
) -> Result<CMatrix, FunctionError> {
    if k > MAX_DERIVATIVE_ORDER {
        return Err(FunctionError::OrderTooHigh(k));
    }
    let margin = f.domain_margin(z)?;
    let r = radius.unwrap_or((0.5 * margin).min(1.0));
    if !(r >= MIN_CONTOUR_RADIUS) || r >= margin {
        return Err(FunctionError::RadiusCollapse { z, margin });
    }
    let moments = contour_moments(f, z, r, k, nodes.max(k + 1))?;
    let fact: f64 = (1..=k).map(|m| m as f64).product();
    Ok(moments[k].scale_real(fact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfunc::ScalarExpr;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn toy() -> MatrixFunction {
        MatrixFunction::entrywise(
            2,
            vec![
                ScalarExpr::real(1.0),
                ScalarExpr::Z,
                ScalarExpr::real(0.0),
                ScalarExpr::sub(ScalarExpr::Z, ScalarExpr::real(1.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn polynomial_coefficients_are_exact() {
        let cs = taylor_coefficients(&toy(), c(0.0, 0.0), 2, 0.5).unwrap();
        let c0 = CMatrix::from_real_diag(&[1.0, -1.0]);
        let c1 = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!((&cs[0] - &c0).frobenius_norm() < 1e-14);
        assert!((&cs[1] - &c1).frobenius_norm() < 1e-14);
        assert!(cs[2].frobenius_norm() < 1e-14);
    }

    #[test]
    fn exp_family_coefficients() {
        let a = CMatrix::from_real_rows(&[&[0.2, 1.0], &[-0.5, 0.1]]).unwrap();
        let f = MatrixFunction::ExpFamily(a.clone());
        let cs = taylor_coefficients(&f, c(0.0, 0.0), 1, 1.0).unwrap();
        assert!((&cs[0] - &CMatrix::identity(2)).frobenius_norm() < 1e-13);
        assert!((&cs[1] - &a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn cauchy_derivative_of_resolvent_matches_square() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let f = MatrixFunction::Resolvent(a);
        let d = derivative_cauchy(&f, c(1.0, 0.0), 1, None, CAUCHY_NODES).unwrap();
        let exact = f.derivative(c(1.0, 0.0), 1).unwrap();
        assert!((&d - &exact).frobenius_norm() < 1e-8);
    }

    #[test]
    fn cauchy_derivative_collapses_at_spectrum() {
        let f = MatrixFunction::Resolvent(CMatrix::from_real_diag(&[0.0, 1.0]));
        assert!(derivative_cauchy(&f, c(1e-9, 0.0), 1, None, CAUCHY_NODES).is_err());
    }
}
