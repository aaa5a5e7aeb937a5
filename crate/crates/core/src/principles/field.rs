use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::PrinciplesError;
use crate::linalg::{svd, CMatrix};
use crate::mfunc::{MatrixFunction, Region};

/// Full singular-value tuple of `F(z)` at every grid point of a region.
///
/// Points where `F` cannot be evaluated (or the SVD fails) are flagged and
/// carry no values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularField {
    pub region: Region,
    n: usize,
    points: Vec<Complex64>,
    values: Vec<f64>,
    flags: Vec<bool>,
    beyond_radius: usize,
}

impl SingularField {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn is_flagged(&self, idx: usize) -> bool {
        self.flags[idx]
    }

    pub fn flagged_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    /// Grid points evaluated outside a recorded Taylor radius.
    pub fn beyond_radius_count(&self) -> usize {
        self.beyond_radius
    }

    /// `s_1..s_n` at grid point `idx`, nonincreasing.
    pub fn values(&self, idx: usize) -> Option<&[f64]> {
        if self.flags[idx] {
            None
        } else {
            Some(&self.values[idx * self.n..(idx + 1) * self.n])
        }
    }

    /// `s_k` at grid point `idx`, with `k` counted from 1.
    pub fn value(&self, k: usize, idx: usize) -> Option<f64> {
        self.values(idx).map(|v| v[k - 1])
    }

    /// The `s_k` field in canonical order.
    pub fn component(&self, k: usize) -> Vec<Option<f64>> {
        assert!(k >= 1 && k <= self.n, "singular value index out of range");
        (0..self.len()).map(|i| self.value(k, i)).collect()
    }

    /// Frobenius norm field `sqrt(Σ s_k²)`.
    pub fn frobenius(&self) -> Vec<Option<f64>> {
        (0..self.len())
            .map(|i| self.values(i).map(|v| v.iter().map(|s| s * s).sum::<f64>().sqrt()))
            .collect()
    }

    /// `(min, max)` of `s_k` over unflagged points.
    pub fn range(&self, k: usize) -> (f64, f64) {
        min_max(&self.component(k))
    }
}

pub(crate) fn min_max(values: &[Option<f64>]) -> (f64, f64) {
    values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Per-point evaluation kept around by checks that need `F(z)` itself.
pub(crate) struct Sample {
    pub matrix: CMatrix,
    pub singular: Vec<f64>,
}

pub(crate) fn evaluate_grid(f: &MatrixFunction, region: &Region) -> Vec<Option<Sample>> {
    (0..region.len())
        .into_par_iter()
        .map(|i| {
            let m = f.eval(region.point(i)).ok()?;
            let dec = svd(&m).ok()?;
            Some(Sample {
                matrix: m,
                singular: dec.s,
            })
        })
        .collect()
}

pub(crate) fn field_from_samples(
    f: &MatrixFunction,
    region: &Region,
    samples: &[Option<Sample>],
) -> Result<SingularField, PrinciplesError> {
    let n = f.dim();
    let points = region.points();
    let mut values = vec![f64::NAN; n * points.len()];
    let mut flags = vec![true; points.len()];
    for (i, s) in samples.iter().enumerate() {
        if let Some(s) = s {
            values[i * n..(i + 1) * n].copy_from_slice(&s.singular);
            flags[i] = false;
        }
    }
    if flags.iter().all(|&f| f) {
        return Err(PrinciplesError::EmptyDomain);
    }
    let beyond_radius = points.iter().filter(|&&z| f.beyond_radius(z)).count();
    Ok(SingularField {
        region: *region,
        n,
        points,
        values,
        flags,
        beyond_radius,
    })
}

/// Evaluates `F` and its SVD at every grid point, in parallel.
///
/// The result is assembled in canonical grid order and does not depend on the
/// number of worker threads.
pub fn scan_field(f: &MatrixFunction, region: &Region) -> Result<SingularField, PrinciplesError> {
    let samples = evaluate_grid(f, region);
    field_from_samples(f, region, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfunc::parse_scenario;

    #[test]
    fn diagonal_counterexample_has_constant_norm() {
        let s = parse_scenario("function F=[[1,0],[0,z]]\nregion disk center=0 radius=0.95 grid=51x64").unwrap();
        let field = scan_field(&s.function, &s.region).unwrap();
        let (lo, hi) = field.range(1);
        assert_eq!((lo, hi), (1.0, 1.0));
        assert_eq!(field.flagged_count(), 0);
    }

    #[test]
    fn resolvent_flags_spectrum_points() {
        let s = parse_scenario(
            "matrix A=[[0,1],[0,0]]\nfunction F=resolvent(A)\nregion rect re=[-1,1] im=[-1,1] grid=3x3",
        )
        .unwrap();
        let field = scan_field(&s.function, &s.region).unwrap();
        assert_eq!(field.flagged_count(), 1);
        assert!(field.is_flagged(4));
        assert!(field.values(4).is_none());
    }

    #[test]
    fn values_are_nonincreasing() {
        let s = parse_scenario("function F=[[1,z],[0,z-1]]\nregion rect re=[-2,2] im=[-2,2] grid=21x21").unwrap();
        let field = scan_field(&s.function, &s.region).unwrap();
        for i in 0..field.len() {
            let v = field.values(i).unwrap();
            assert!(v[0] >= v[1] && v[1] >= 0.0);
        }
    }
}
