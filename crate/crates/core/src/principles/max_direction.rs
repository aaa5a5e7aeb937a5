use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{evaluate_grid, field_from_samples};
use super::{PrinciplesError, Verdict, VerificationReport, DEFAULT_TAU, MAX_SLACK};
use crate::linalg::{maximizing_subspace_from, svd, vec_norm};
use crate::mfunc::{MatrixFunction, Region};

fn deviation(f: &MatrixFunction, z: Complex64, x: &[Complex64], target: &[Complex64]) -> Option<f64> {
    let fx = f.eval(z).ok()?.mul_vec(x);
    let d: Vec<Complex64> = fx.iter().zip(target).map(|(a, b)| a - b).collect();
    Some(vec_norm(&d))
}

/// Checks that a maximizing vector `x₀` of `F(z₀)` is a fixed direction:
/// `F(z)x₀ = F(z₀)x₀` on the region and `F⁽ᵏ⁾(z₀)x₀ = 0` for `k = 1..=Kd`.
///
/// `x₀` defaults to the first vector of the maximizing subspace; an
/// explicit `x` is normalized and used instead. Unless `z₀` maximizes the
/// `s₁` field on the grid the verdict is inconclusive. In either case the
/// report lists how far `z₀` is from minimizing `s₁`.
pub fn check_max_direction(
    f: &MatrixFunction,
    region: &Region,
    z0: Complex64,
    derivative_orders: usize,
    x: Option<&[Complex64]>,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, PrinciplesError> {
    let n = f.dim();
    let fz0 = f.eval(z0)?;
    let dec = svd(&fz0)?;
    let sigma = dec.s[0];
    let x0: Vec<Complex64> = match x {
        Some(v) => {
            if v.len() != n {
                return Err(PrinciplesError::InvalidArgument(format!(
                    "vector has length {}, function has dimension {n}",
                    v.len()
                )));
            }
            let norm = vec_norm(v);
            if norm == 0.0 {
                return Err(PrinciplesError::InvalidArgument("zero vector".into()));
            }
            v.iter().map(|c| c / norm).collect()
        }
        None => {
            if sigma == 0.0 {
                return Err(crate::linalg::LinalgError::ZeroMatrix.into());
            }
            maximizing_subspace_from(&dec, DEFAULT_TAU)?.columns()[0].clone()
        }
    };
    let target = fz0.mul_vec(&x0);

    let grid = evaluate_grid(f, region);
    let field = field_from_samples(f, region, &grid)?;
    let (s1_min, s1_max) = field.range(1);
    let argmax = (0..field.len())
        .filter(|&i| field.value(1, i) == Some(s1_max))
        .map(|i| region.point(i))
        .next()
        .unwrap_or(z0);

    let grid_dev = grid
        .par_iter()
        .filter_map(|s| {
            let s = s.as_ref()?;
            let fx = s.matrix.mul_vec(&x0);
            let d: Vec<Complex64> = fx.iter().zip(&target).map(|(a, b)| a - b).collect();
            Some(vec_norm(&d))
        })
        .reduce(|| 0.0, f64::max);
    let pts = region.interior_samples(samples, seed);
    let sample_dev = pts
        .par_iter()
        .filter_map(|&z| deviation(f, z, &x0, &target))
        .reduce(|| 0.0, f64::max);
    let mut derivative_norms = Vec::with_capacity(derivative_orders);
    for k in 1..=derivative_orders {
        derivative_norms.push(vec_norm(&f.derivative(z0, k)?.mul_vec(&x0)));
    }
    let derivative_max = derivative_norms.iter().copied().fold(0.0, f64::max);

    let tol = 1e-6 * (1.0 + sigma);
    let slack = MAX_SLACK * sigma.max(1.0);
    let is_max = s1_max <= sigma + slack;

    let mut report = VerificationReport::new("max-direction");
    report
        .param("z0", z0)
        .param("Kd", derivative_orders)
        .param("samples", samples)
        .param("seed", seed)
        .witness("x0", x0.as_slice())
        .witness("sigma", sigma)
        .witness("maximizing_defect", sigma - vec_norm(&target))
        .witness("derivative_norms", derivative_norms.clone())
        .witness("grid_s1_min", s1_min)
        .witness("grid_s1_max", s1_max)
        .witness("min_remark_gap", sigma - s1_min)
        .residual("grid_deviation", grid_dev, Some(tol))
        .residual("sample_deviation", sample_dev, Some(tol))
        .residual("derivative_max", derivative_max, Some(tol));

    if !is_max {
        report
            .witness("exceeding_point", argmax)
            .witness("exceeding_value", s1_max)
            .set_verdict(Verdict::Inconclusive)
            .reason("z0 is not a maximum of the s1 field on this region");
        return Ok(report);
    }
    // With z0 a maximum and F(z)x0 fixed, ‖F(z)‖ ≥ ‖F(z0)x0‖ = ‖F(z0)‖: z0 is also a minimum.
    report.residual("min_remark_violation", (sigma - s1_min).max(0.0), Some(slack));
    report.settle();
    if report.verdict == Verdict::Refuted {
        report.reason("maximizing direction moves with z");
    }
    Ok(report)
}
