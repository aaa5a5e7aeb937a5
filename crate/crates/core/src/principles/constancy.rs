use num_complex::Complex64;

use super::field::{evaluate_grid, field_from_samples, min_max, Sample};
use super::{
    interior_extremum, interior_frobenius_extremum, locate_extremum, locate_scalar, ExtremumKind, PrinciplesError,
    Value, Verdict, VerificationReport,
};
use crate::linalg::{det, singular_values, CMatrix};
use crate::mfunc::{MatrixFunction, Region};

/// Relative threshold separating "constant" from "nonconstant".
const CONSTANCY_TOL: f64 = 1e-8;

fn reference(samples: &[Option<Sample>]) -> Option<&CMatrix> {
    samples.iter().flatten().map(|s| &s.matrix).next()
}

fn matrix_deviation(samples: &[Option<Sample>], reference: &CMatrix) -> f64 {
    samples
        .iter()
        .flatten()
        .map(|s| (&s.matrix - reference).frobenius_norm())
        .fold(0.0, f64::max)
}

/// The five equivalent characterizations of a constant function, evaluated on the grid:
///
/// 1. `F` is constant;
/// 2. every `s_k` field is constant;
/// 3. every `s_k` field attains an interior maximum;
/// 4. `‖F‖_F` is constant;
/// 5. `‖F‖_F` attains an interior maximum.
///
/// Certified when all five agree, refuted otherwise. Any singular grid
/// point makes the report inconclusive.
pub fn constancy_report(f: &MatrixFunction, region: &Region) -> Result<VerificationReport, PrinciplesError> {
    let samples = evaluate_grid(f, region);
    let field = field_from_samples(f, region, &samples)?;
    let mut report = VerificationReport::new("constancy");
    report.param("grid_points", field.len());
    if field.flagged_count() > 0 {
        report
            .witness("flagged_points", field.flagged_count())
            .set_verdict(Verdict::Inconclusive)
            .reason("function is singular at some grid points");
        return Ok(report);
    }
    let zref = field.points()[0];
    let fref = reference(&samples).expect("no flagged points");
    let tol = CONSTANCY_TOL * fref.frobenius_norm().max(1.0);

    let dev_f = matrix_deviation(&samples, fref);
    let dev_s: Vec<f64> = (1..=field.dim())
        .map(|k| {
            let (lo, hi) = field.range(k);
            hi - lo
        })
        .collect();
    let interior_k: Vec<bool> = (1..=field.dim())
        .map(|k| interior_extremum(&field, f, k, ExtremumKind::Max).is_some())
        .collect();
    let (fro_lo, fro_hi) = min_max(&field.frobenius());
    let dev_fro = fro_hi - fro_lo;
    let interior_fro = interior_frobenius_extremum(&field, f, ExtremumKind::Max).is_some();

    let conditions = [
        dev_f <= tol,
        dev_s.iter().all(|&d| d <= tol),
        interior_k.iter().all(|&b| b),
        dev_fro <= tol,
        interior_fro,
    ];
    let trues = conditions.iter().filter(|&&b| b).count();
    let disagreements = trues.min(conditions.len() - trues);

    report
        .param("tolerance", tol)
        .witness("z_ref", zref)
        .witness("conditions", conditions.to_vec())
        .witness("frobenius_deviation", dev_f)
        .witness("singular_value_deviation", dev_s)
        .witness("interior_max_per_k", interior_k)
        .witness("frobenius_norm_deviation", dev_fro)
        .witness("frobenius_norm_interior_max", interior_fro)
        .witness("constant", conditions[0])
        .residual("disagreements", disagreements as f64, Some(0.0))
        .settle();
    if report.verdict == Verdict::Refuted {
        report.reason("the five characterizations of constancy disagree on this grid");
    }
    Ok(report)
}

/// Local minima of a grid field below `threshold`, each refined and deduplicated.
fn small_local_minima(
    region: &Region,
    values: &[Option<f64>],
    objective: &(dyn Fn(Complex64) -> Option<f64> + Sync),
    k: usize,
    threshold: f64,
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for i in 0..values.len() {
        let Some(v) = values[i] else { continue };
        if v >= threshold {
            continue;
        }
        if region.neighbors(i).iter().any(|&j| values[j].is_some_and(|w| w < v)) {
            continue;
        }
        let mut local = vec![None; values.len()];
        local[i] = Some(v);
        let Some(rep) = locate_scalar(region, &local, objective, k, ExtremumKind::Min) else { continue };
        if out.iter().all(|z| (z - rep.location).norm() > region.spacing()) {
            out.push(rep.location);
        }
    }
    out
}

/// Minimum principle: a common interior minimizer of all `s_k` fields of a
/// nonconstant `F` must be a zero of `det F`.
///
/// When the per-`k` minimizers are distinct the verdict is inconclusive; the
/// report lists them together with the small local minima of `s_n`.
pub fn check_min_principle(f: &MatrixFunction, region: &Region) -> Result<VerificationReport, PrinciplesError> {
    let samples = evaluate_grid(f, region);
    let field = field_from_samples(f, region, &samples)?;
    let n = field.dim();
    let fref = reference(&samples).expect("field has an unflagged point");
    let scale = fref.frobenius_norm().max(1.0);
    let dev_f = matrix_deviation(&samples, fref);
    let nonconstant = dev_f > CONSTANCY_TOL * scale;

    let minimizers: Vec<_> = (1..=n)
        .map(|k| locate_extremum(&field, f, k, ExtremumKind::Min).expect("field has an unflagged point"))
        .collect();
    let z0 = minimizers[n - 1].location;
    let s_at_z0 = singular_values(&f.eval(z0)?)?;
    let minimized: Vec<bool> = minimizers
        .iter()
        .map(|m| {
            let v = s_at_z0[m.k - 1];
            (m.location - z0).norm() <= region.spacing() || v <= m.value + CONSTANCY_TOL * m.value.abs().max(1.0)
        })
        .collect();
    let common = minimized.iter().all(|&b| b) && !minimizers[n - 1].on_boundary;
    let fz0 = f.eval(z0)?;
    let det_abs = det(&fz0).norm();
    let det_tol = 1e-8 * fz0.frobenius_norm().powi(n as i32);

    let mut report = VerificationReport::new("min-principle");
    report
        .witness("z0", z0)
        .witness("singular_values_at_z0", s_at_z0.clone())
        .witness(
            "minimizers",
            minimizers
                .iter()
                .map(|m| {
                    Value::Object(
                        [
                            ("k".to_string(), Value::from(m.k)),
                            ("location".to_string(), Value::from(m.location)),
                            ("value".to_string(), Value::from(m.value)),
                            ("on_boundary".to_string(), Value::from(m.on_boundary)),
                        ]
                        .into_iter()
                        .collect(),
                    )
                })
                .collect::<Vec<_>>(),
        )
        .witness("minimized_at_z0", minimized)
        .witness("frobenius_deviation", dev_f)
        .witness("det_abs", det_abs);

    if !nonconstant {
        report
            .set_verdict(Verdict::Certified)
            .reason("F is constant on the grid; the principle holds trivially");
        return Ok(report);
    }
    if common {
        report.residual("det_abs", det_abs, Some(det_tol)).settle();
        if report.verdict == Verdict::Refuted {
            report.reason("common interior minimizer of every s_k where F is invertible");
        }
        return Ok(report);
    }
    let objective = |z: Complex64| {
        let m = f.eval(z).ok()?;
        singular_values(&m).ok().map(|s| s[n - 1])
    };
    let (_, s1_max) = field.range(1);
    let zeros = small_local_minima(region, &field.component(n), &objective, n, 1e-6 * s1_max.max(1.0));
    report
        .witness("sn_small_minima", zeros)
        .set_verdict(Verdict::Inconclusive)
        .reason("the s_k fields have no common interior minimizer");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfunc::parse_scenario;

    fn scenario(text: &str) -> (MatrixFunction, Region) {
        let s = parse_scenario(text).unwrap();
        (s.function, s.region)
    }

    fn conditions(rep: &VerificationReport) -> Vec<bool> {
        match &rep.witnesses["conditions"] {
            Value::List(v) => v.iter().map(|b| matches!(b, Value::Bool(true))).collect(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn constant_function_satisfies_all_five() {
        let (f, r) = scenario("function F=[[2,1i],[0,1]]\nregion disk center=0 radius=1 grid=8x12");
        let rep = constancy_report(&f, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Certified);
        assert_eq!(conditions(&rep), vec![true; 5]);
    }

    #[test]
    fn diagonal_counterexample_satisfies_none() {
        let (f, r) = scenario("function F=[[1,0],[0,z]]\nregion disk center=0 radius=0.95 grid=26x32");
        let rep = constancy_report(&f, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Certified);
        assert_eq!(conditions(&rep), vec![false; 5]);
    }

    #[test]
    fn toy_satisfies_none() {
        let (f, r) = scenario("function F=[[1,z],[0,z-1]]\nregion rect re=[-2,2] im=[-2,2] grid=41x41");
        let rep = constancy_report(&f, &r).unwrap();
        assert_eq!(conditions(&rep), vec![false; 5]);
    }

    #[test]
    fn min_principle_on_diagonal_counterexample() {
        let (f, r) = scenario("function F=[[1,0],[0,z]]\nregion disk center=0 radius=0.95 grid=26x32");
        let rep = check_min_principle(&f, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Certified, "{rep:?}");
        assert!(rep.residual_value("det_abs").unwrap() < 1e-12);
    }

    #[test]
    fn min_principle_on_toy_reports_distinct_minimizers() {
        let (f, r) = scenario("function F=[[1,z],[0,z-1]]\nregion rect re=[-2,2] im=[-2,2] grid=41x41");
        let rep = check_min_principle(&f, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        let Value::List(ms) = &rep.witnesses["minimizers"] else { unreachable!() };
        assert_eq!(ms.len(), 2);
    }

    #[test]
    fn min_principle_on_two_zero_example() {
        let (f, r) = scenario("function K=[[z,1],[0,z-1]]\nregion rect re=[-2,2] im=[-2,2] grid=41x41");
        let rep = check_min_principle(&f, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        let Value::List(zs) = &rep.witnesses["sn_small_minima"] else { unreachable!() };
        let zs: Vec<Complex64> = zs
            .iter()
            .map(|v| match v {
                Value::Complex(c) => Complex64::new(c.re, c.im),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(zs.len(), 2, "{zs:?}");
        assert!(zs.iter().any(|z| z.norm() < 1e-6));
        assert!(zs.iter().any(|z| (z - 1.0).norm() < 1e-6));
    }
}
