use num_complex::Complex64;
use serde::Serialize;

use super::nelder_mead;
use super::SingularField;
use crate::linalg::singular_values;
use crate::mfunc::{MatrixFunction, Region};

pub const REFINE_MAX_ITER: usize = 200;

/// Relative slack under which grid values count as tied.
const TIE_TOL: f64 = 1e-14;
/// A refined value must beat the grid value by this much (relative) to replace it.
const IMPROVEMENT_TOL: f64 = 1e-13;
/// Interior optimum may fall short of the boundary-ring optimum by this much.
const RING_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

impl ExtremumKind {
    fn sign(self) -> f64 {
        match self {
            ExtremumKind::Max => -1.0,
            ExtremumKind::Min => 1.0,
        }
    }

    fn better(self, a: f64, b: f64) -> bool {
        match self {
            ExtremumKind::Max => a > b,
            ExtremumKind::Min => a < b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremumReport {
    /// Singular value index from 1; 0 denotes the Frobenius norm field.
    pub k: usize,
    pub kind: ExtremumKind,
    pub location: Complex64,
    pub value: f64,
    /// Refined location lies within half a grid step of the boundary.
    pub on_boundary: bool,
    pub refined: bool,
    pub grid_location: Complex64,
    pub grid_value: f64,
    /// Grid optimum sits on the outer ring of the grid.
    pub grid_on_boundary: bool,
}

/// Index of the grid optimum over `candidates`, ties broken by smallest Re, then Im.
fn grid_optimum(
    region: &Region,
    values: &[Option<f64>],
    kind: ExtremumKind,
    candidates: impl Iterator<Item = usize> + Clone,
) -> Option<usize> {
    let best = candidates
        .clone()
        .filter_map(|i| values[i])
        .reduce(|a, b| if kind.better(b, a) { b } else { a })?;
    let slack = TIE_TOL * best.abs().max(1.0);
    candidates
        .filter(|&i| values[i].is_some_and(|v| (v - best).abs() <= slack))
        .min_by(|&a, &b| {
            let (za, zb) = (region.point(a), region.point(b));
            za.re.total_cmp(&zb.re).then(za.im.total_cmp(&zb.im))
        })
}

fn refine(
    region: &Region,
    objective: &(dyn Fn(Complex64) -> Option<f64> + Sync),
    k: usize,
    kind: ExtremumKind,
    start: Complex64,
    grid_value: f64,
    grid_on_boundary: bool,
) -> ExtremumReport {
    let sign = kind.sign();
    let (z, v) = nelder_mead::minimize(
        |z| {
            if region.contains(z) {
                objective(z).map(|v| sign * v)
            } else {
                None
            }
        },
        start,
        region.steps(),
        REFINE_MAX_ITER,
        region.spacing() * 1e-6,
    );
    let refined_value = sign * v;
    let improved = v.is_finite()
        && kind.better(refined_value, grid_value)
        && (refined_value - grid_value).abs() > IMPROVEMENT_TOL * grid_value.abs().max(1.0);
    let (location, value) = if improved { (z, refined_value) } else { (start, grid_value) };
    ExtremumReport {
        k,
        kind,
        location,
        value,
        on_boundary: region.near_boundary(location),
        refined: improved,
        grid_location: start,
        grid_value,
        grid_on_boundary,
    }
}

/// Grid optimum of an arbitrary scalar field, refined with Nelder–Mead on `objective`.
pub fn locate_scalar(
    region: &Region,
    values: &[Option<f64>],
    objective: &(dyn Fn(Complex64) -> Option<f64> + Sync),
    k: usize,
    kind: ExtremumKind,
) -> Option<ExtremumReport> {
    let idx = grid_optimum(region, values, kind, 0..values.len())?;
    Some(refine(
        region,
        objective,
        k,
        kind,
        region.point(idx),
        values[idx]?,
        region.is_boundary_index(idx),
    ))
}

/// Interior extremum of an arbitrary scalar field, if the grid supports one.
///
/// The best point off the outer grid ring is refined; it counts only if the
/// refinement stays away from the boundary and its value is no worse than
/// the best boundary-ring value, up to a small slack that admits ties.
pub fn interior_scalar(
    region: &Region,
    values: &[Option<f64>],
    objective: &(dyn Fn(Complex64) -> Option<f64> + Sync),
    k: usize,
    kind: ExtremumKind,
) -> Option<ExtremumReport> {
    let interior = (0..values.len()).filter(|&i| !region.is_boundary_index(i));
    let ring = (0..values.len()).filter(|&i| region.is_boundary_index(i));
    let idx = grid_optimum(region, values, kind, interior)?;
    let report = refine(region, objective, k, kind, region.point(idx), values[idx]?, false);
    if report.on_boundary {
        return None;
    }
    if let Some(ring_idx) = grid_optimum(region, values, kind, ring) {
        let ring_best = values[ring_idx]?;
        let slack = RING_SLACK * ring_best.abs().max(1.0);
        let dominated = match kind {
            ExtremumKind::Max => report.value < ring_best - slack,
            ExtremumKind::Min => report.value > ring_best + slack,
        };
        if dominated {
            return None;
        }
    }
    Some(report)
}

fn singular_objective(f: &MatrixFunction, k: usize) -> impl Fn(Complex64) -> Option<f64> + Sync + '_ {
    move |z| {
        let m = f.eval(z).ok()?;
        singular_values(&m).ok().map(|s| s[k - 1])
    }
}

/// Optimum of the `s_k` field, refined on `z ↦ ±s_k(F(z))`.
pub fn locate_extremum(field: &SingularField, f: &MatrixFunction, k: usize, kind: ExtremumKind) -> Option<ExtremumReport> {
    let objective = singular_objective(f, k);
    locate_scalar(&field.region, &field.component(k), &objective, k, kind)
}

/// Interior extremum of the `s_k` field; see [`interior_scalar`].
pub fn interior_extremum(
    field: &SingularField,
    f: &MatrixFunction,
    k: usize,
    kind: ExtremumKind,
) -> Option<ExtremumReport> {
    let objective = singular_objective(f, k);
    interior_scalar(&field.region, &field.component(k), &objective, k, kind)
}

/// Interior extremum of the Frobenius norm field.
pub fn interior_frobenius_extremum(field: &SingularField, f: &MatrixFunction, kind: ExtremumKind) -> Option<ExtremumReport> {
    let objective = |z: Complex64| f.eval(z).ok().map(|m| m.frobenius_norm());
    interior_scalar(&field.region, &field.frobenius(), &objective, 0, kind)
}
