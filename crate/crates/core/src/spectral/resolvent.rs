use num_complex::Complex64;

use super::{pseudospectra_field, SpectralError};
use crate::linalg::{singular_values, CMatrix};
use crate::mfunc::{derivative_cauchy, MatrixFunction, Region, CAUCHY_NODES};
use crate::principles::{locate_extremum, scan_field, ExtremumKind, Verdict, VerificationReport};

/// Regions closer than this to the spectrum are rejected.
pub const SPECTRUM_MARGIN: f64 = 1e-6;
pub const DEFAULT_STEP: f64 = 1e-5;

/// Extremum strictness for `‖R_A‖ = s₁(R_A)` and `s_n(R_A)`: both extrema lie
/// on the boundary and neither field is constant.
///
/// Also checks the reciprocity `s_k(R_A(z))·s_{n−k+1}(A − zI) = 1` against
/// an independently computed pseudospectra field.
pub fn resolvent_extrema_check(a: &CMatrix, region: &Region) -> Result<VerificationReport, SpectralError> {
    let n = a.dim();
    let ps = pseudospectra_field(a, region)?;
    let (zmin, margin) = ps.min();
    if margin <= SPECTRUM_MARGIN {
        return Err(SpectralError::TouchesSpectrum {
            z: zmin,
            value: margin,
            margin: SPECTRUM_MARGIN,
        });
    }
    let f = MatrixFunction::Resolvent(a.clone());
    let field = scan_field(&f, region)?;
    let max1 = locate_extremum(&field, &f, 1, ExtremumKind::Max).expect("no flagged points above the margin");
    let minn = locate_extremum(&field, &f, n, ExtremumKind::Min).expect("no flagged points above the margin");

    let relative_spread = |k: usize| {
        let (lo, hi) = field.range(k);
        (hi - lo) / hi.max(f64::MIN_POSITIVE)
    };
    let spread_1 = relative_spread(1);
    let spread_n = relative_spread(n);

    let mut reciprocity: f64 = 0.0;
    let mut pencil_sv_max: f64 = 0.0;
    for i in 0..field.len() {
        let Some(rs) = field.values(i) else { continue };
        let ls = singular_values(&a.shift(-field.points()[i]))?;
        for k in 0..n {
            reciprocity = reciprocity.max((rs[k] * ls[n - 1 - k] - 1.0).abs());
        }
        pencil_sv_max = pencil_sv_max.max((ls[n - 1] - ps.values[i]).abs());
    }

    let mut report = VerificationReport::new("resolvent");
    report
        .param("grid_points", field.len())
        .witness("spectrum_margin", margin)
        .witness("max_s1_location", max1.location)
        .witness("max_s1_value", max1.value)
        .witness("max_s1_on_boundary", max1.on_boundary)
        .witness("max_s1_grid_on_boundary", max1.grid_on_boundary)
        .witness("min_sn_location", minn.location)
        .witness("min_sn_value", minn.value)
        .witness("min_sn_on_boundary", minn.on_boundary)
        .witness("min_sn_grid_on_boundary", minn.grid_on_boundary)
        .witness("s1_relative_spread", spread_1)
        .witness("sn_relative_spread", spread_n)
        .residual("reciprocity", reciprocity, Some(1e-8))
        .residual("pencil_consistency", pencil_sv_max, Some(1e-12 * (1.0 + margin)));

    let on_boundary = max1.on_boundary && max1.grid_on_boundary && minn.on_boundary && minn.grid_on_boundary;
    let nonconstant = spread_1 > 1e-8 && spread_n > 1e-8;
    let interior = |ok: bool| if ok { 0.0 } else { 1.0 };
    report
        .residual("interior_extrema", interior(on_boundary), Some(0.0))
        .residual("constant_fields", interior(nonconstant), Some(0.0))
        .settle();
    if report.verdict == Verdict::Refuted {
        report.reason("a resolvent singular-value field has an interior extremum or is constant");
    }
    Ok(report)
}

fn snap_to_power_of_two(h: f64) -> f64 {
    2f64.powi(h.log2().round() as i32)
}

/// Central-difference checks of `R′ = R²` and `L′ = −I` at `z`.
///
/// The step is rounded to a power of two. The pencil residual's tolerance
/// grows with the rounding floor `ε·(max|a_ii| + |z| + h)/h` of the
/// difference quotient, since its entries cancel in floating point only up
/// to that level.
pub fn resolvent_derivative_identity(a: &CMatrix, z: Complex64, h: f64) -> Result<VerificationReport, SpectralError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(SpectralError::Precondition(format!("step h = {h} must be positive")));
    }
    let h = snap_to_power_of_two(h);
    let n = a.dim();
    let s = singular_values(&a.shift(-z))?;
    let distance = s[n - 1];
    if distance <= 10.0 * h {
        return Err(SpectralError::Precondition(format!(
            "z = {z} is within {distance:e} of the spectrum; need more than 10h = {:e}",
            10.0 * h
        )));
    }
    let hc = Complex64::new(h, 0.0);
    let resolvent = MatrixFunction::Resolvent(a.clone());
    let pencil = MatrixFunction::Pencil(a.clone());
    let r = resolvent.eval(z)?;
    let r2 = &r * &r;
    let fd = (&resolvent.eval(z + hc)? - &resolvent.eval(z - hc)?).scale_real(0.5 / h);
    let res1 = (&fd - &r2).frobenius_norm();
    let rnorm = 1.0 / distance;
    let tol1 = 1e-6 * (1.0 + rnorm * rnorm);

    let lfd = (&pencil.eval(z + hc)? - &pencil.eval(z - hc)?).scale_real(0.5 / h);
    let res2 = (&lfd + &CMatrix::identity(n)).frobenius_norm();
    let diag_max = (0..n).map(|i| a[(i, i)].norm()).fold(0.0, f64::max);
    let floor = 4.0 * (n as f64).sqrt() * f64::EPSILON * (diag_max + z.norm() + h) / h;
    let tol2 = floor.max(1e-12);

    let contour = derivative_cauchy(&resolvent, z, 1, None, CAUCHY_NODES)?;
    let res3 = (&contour - &r2).frobenius_norm();

    let mut report = VerificationReport::new("resolvent-derivative");
    report
        .param("z", z)
        .param("h", h)
        .witness("R", &r)
        .witness("R_squared", &r2)
        .witness("spectrum_distance_lower_bound", distance)
        .residual("resolvent_difference", res1, Some(tol1))
        .residual("pencil_difference", res2, Some(tol2))
        .residual("resolvent_contour", res3, Some(1e-8 * (1.0 + rnorm * rnorm)))
        .settle();
    Ok(report)
}
