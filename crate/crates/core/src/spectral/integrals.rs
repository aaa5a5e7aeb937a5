use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpectralError;
use crate::linalg::{inverse, matrix_exp, operator_norm, CMatrix};
use crate::mfunc::{MatrixFunction, Region};
use crate::principles::{scan_field, VerificationReport};
use crate::quadrature::composite_gauss_legendre;

/// Gauss–Legendre nodes per unit-width panel.
pub const LAPLACE_ORDER: usize = 16;
pub const CAUCHY_EXP_NODES: usize = 512;

/// `∫₀^∞ e^{−zt} exp(tA) dt = (zI − A)⁻¹` for `Re z > ‖A‖`.
///
/// The integral is truncated at `T = ln(1/ε)/(Re z − ‖A‖)`, where the
/// integrand norm has decayed below `ε`, and integrated with unit-width
/// Gauss–Legendre panels.
pub fn laplace_identity_check(a: &CMatrix, z: Complex64, eps: f64) -> Result<VerificationReport, SpectralError> {
    let n = a.dim();
    let norm = operator_norm(a)?;
    if !(z.re > norm + 0.1) {
        return Err(SpectralError::Precondition(format!(
            "Re z = {} must exceed ||A|| + 0.1 = {}",
            z.re,
            norm + 0.1
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SpectralError::Precondition(format!("tail tolerance {eps} must lie in (0, 1)")));
    }
    let t_max = (1.0 / eps).ln() / (z.re - norm);
    let panels = (t_max.ceil() as usize).max(1);
    let mut q = CMatrix::zeros(n);
    for (t, w) in composite_gauss_legendre(0.0, t_max, panels, LAPLACE_ORDER) {
        let weight = (-z * t).exp() * w;
        q = &q + &matrix_exp(&a.scale_real(t)).scale(weight);
    }
    let exact = inverse(&(&CMatrix::identity(n).scale(z) - a))?;
    let residual = (&q - &exact).frobenius_norm();

    let mut report = VerificationReport::new("laplace");
    report
        .param("z", z)
        .param("eps", eps)
        .param("T", t_max)
        .param("panels", panels)
        .param("order", LAPLACE_ORDER)
        .witness("quadrature", &q)
        .witness("resolvent", &exact)
        .residual("difference", residual, Some(10.0 * eps + 1e-8))
        .settle();
    Ok(report)
}

/// `exp(tA) = (1/2πi)∮ e^{tξ}(ξI − A)⁻¹ dξ` on `|ξ| = r`, by the trapezoid rule.
///
/// `r` defaults to `‖A‖ + 1`.
pub fn cauchy_exp_reconstruction(
    a: &CMatrix,
    t: f64,
    r: Option<f64>,
    nodes: usize,
) -> Result<VerificationReport, SpectralError> {
    let n = a.dim();
    let norm = operator_norm(a)?;
    let r = r.unwrap_or(norm + 1.0);
    if !(r > 1.1 * norm) || !(r > 0.0) || !r.is_finite() {
        return Err(SpectralError::Precondition(format!(
            "radius {r} must exceed 1.1 ||A|| = {}",
            1.1 * norm
        )));
    }
    if nodes == 0 || !t.is_finite() {
        return Err(SpectralError::Precondition("need N > 0 and finite t".into()));
    }
    let mut q = CMatrix::zeros(n);
    for j in 0..nodes {
        let xi = Complex64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64);
        // dξ = iξ dθ, and the 1/(2πi) leaves ξ/N per node.
        let weight = (xi * t).exp() * xi / nodes as f64;
        q = &q + &inverse(&(&CMatrix::identity(n).scale(xi) - a))?.scale(weight);
    }
    let exact = matrix_exp(&a.scale_real(t));
    let residual = (&q - &exact).frobenius_norm();

    let mut report = VerificationReport::new("cauchy");
    report
        .param("t", t)
        .param("r", r)
        .param("N", nodes)
        .witness("quadrature", &q)
        .witness("exp_tA", &exact)
        .residual("difference", residual, Some(1e-8 * (t * r).exp()))
        .settle();
    Ok(report)
}

/// `F(z) = exp(z·diag(0, 1))` has `s₁ = max(1, e^{Re z})` and `s₂ = min(1, e^{Re z})`,
/// so `s₁` is constant on the left half-plane and `s₂` on the right.
pub fn exp_halfplane_example(region: &Region) -> Result<VerificationReport, SpectralError> {
    let f = MatrixFunction::ExpFamily(CMatrix::from_real_diag(&[0.0, 1.0]));
    let field = scan_field(&f, region)?;
    let delta = region.spacing();
    let mut dev1: f64 = 0.0;
    let mut dev2: f64 = 0.0;
    let mut left: Vec<f64> = Vec::new();
    let mut right: Vec<f64> = Vec::new();
    for (i, z) in field.points().iter().enumerate() {
        let Some(s) = field.values(i) else { continue };
        let e = z.re.exp();
        dev1 = dev1.max((s[0] - e.max(1.0)).abs());
        dev2 = dev2.max((s[1] - e.min(1.0)).abs());
        if z.re < -delta {
            left.push(s[0]);
        }
        if z.re > delta {
            right.push(s[1]);
        }
    }
    let spread = |v: &[f64]| {
        v.iter().fold(0.0f64, |m, x| m.max((x - 1.0).abs()))
    };

    let mut report = VerificationReport::new("exp-example");
    report
        .param("delta", delta)
        .param("grid_points", field.len())
        .residual("s1_closed_form", dev1, Some(1e-10))
        .residual("s2_closed_form", dev2, Some(1e-10))
        .witness("left_subgrid_points", left.len())
        .witness("right_subgrid_points", right.len());
    if !left.is_empty() {
        report.residual("s1_left_constancy", spread(&left), Some(1e-12));
    }
    if !right.is_empty() {
        report.residual("s2_right_constancy", spread(&right), Some(1e-12));
    }
    report.settle();
    Ok(report)
}
