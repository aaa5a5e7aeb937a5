use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::SpectralError;
use crate::linalg::{singular_values, CMatrix};
use crate::mfunc::Region;

/// `z ↦ s_n(A − zI)`, the reciprocal resolvent norm, on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudospectraField {
    pub a: CMatrix,
    pub region: Region,
    pub points: Vec<Complex64>,
    pub values: Vec<f64>,
}

impl PseudospectraField {
    /// Smallest value and where it occurs (first in canonical order).
    pub fn min(&self) -> (Complex64, f64) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
        (self.points[i], v)
    }
}

/// Evaluates the pencil's smallest singular value; never inverts.
pub fn pseudospectra_field(a: &CMatrix, region: &Region) -> Result<PseudospectraField, SpectralError> {
    let points = region.points();
    let values = points
        .par_iter()
        .map(|&z| singular_values(&a.shift(-z)).map(|s| s[s.len() - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PseudospectraField {
        a: a.clone(),
        region: *region,
        points,
        values,
    })
}
