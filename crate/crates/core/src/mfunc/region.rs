use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::FunctionError;

/// Largest number of grid points a region may carry.
pub const MAX_GRID_POINTS: usize = 4_000_000;

/// Seed for reproducible interior samples unless a caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape {
    Rect {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },
    Disk {
        center: Complex64,
        radius: f64,
    },
}

/// Scanning domain with its sampling grid.
///
/// Rectangles carry `n1` points along the real axis and `n2` along the
/// imaginary axis, both including the edges. Canonical order is row-major
/// with rows indexed by the imaginary coordinate.
///
/// Disks carry `n1` radii (`0` through `radius`) and `n2` angles; the center
/// is stored once, first, followed by ring after ring with angles `2πj/n2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub shape: Shape,
    pub n1: usize,
    pub n2: usize,
}

impl Region {
    pub fn rect(
        re: (f64, f64),
        im: (f64, f64),
        n_re: usize,
        n_im: usize,
    ) -> Result<Self, FunctionError> {
        let finite = [re.0, re.1, im.0, im.1].iter().all(|x| x.is_finite());
        if !finite || re.1 <= re.0 || im.1 <= im.0 {
            return Err(FunctionError::InvalidRegion(format!(
                "rectangle [{}, {}] x [{}, {}] has empty interior",
                re.0, re.1, im.0, im.1
            )));
        }
        Self::checked(
            Shape::Rect {
                re_min: re.0,
                re_max: re.1,
                im_min: im.0,
                im_max: im.1,
            },
            n_re,
            n_im,
        )
    }

    pub fn disk(center: Complex64, radius: f64, n_radial: usize, n_angular: usize) -> Result<Self, FunctionError> {
        if !(radius > 0.0) || !radius.is_finite() || !center.re.is_finite() || !center.im.is_finite() {
            return Err(FunctionError::InvalidRegion(format!("disk radius {radius} must be positive")));
        }
        Self::checked(Shape::Disk { center, radius }, n_radial, n_angular)
    }

    fn checked(shape: Shape, n1: usize, n2: usize) -> Result<Self, FunctionError> {
        if n1 < 2 || n2 < 2 {
            return Err(FunctionError::InvalidRegion(format!(
                "grid counts must be at least 2, got {n1}x{n2}"
            )));
        }
        let r = Region { shape, n1, n2 };
        if r.len() > MAX_GRID_POINTS {
            return Err(FunctionError::InvalidRegion(format!(
                "grid has {} points, cap is {MAX_GRID_POINTS}",
                r.len()
            )));
        }
        Ok(r)
    }

    pub fn len(&self) -> usize {
        match self.shape {
            Shape::Rect { .. } => self.n1 * self.n2,
            Shape::Disk { .. } => 1 + (self.n1 - 1) * self.n2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid steps along the two axes (radial step twice for disks).
    pub fn steps(&self) -> (f64, f64) {
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => (
                (re_max - re_min) / (self.n1 - 1) as f64,
                (im_max - im_min) / (self.n2 - 1) as f64,
            ),
            Shape::Disk { radius, .. } => {
                let dr = radius / (self.n1 - 1) as f64;
                (dr, dr)
            }
        }
    }

    /// Coarsest grid spacing.
    pub fn spacing(&self) -> f64 {
        match self.shape {
            Shape::Rect { .. } => {
                let (a, b) = self.steps();
                a.max(b)
            }
            Shape::Disk { radius, .. } => {
                let dr = radius / (self.n1 - 1) as f64;
                dr.max(radius * 2.0 * PI / self.n2 as f64)
            }
        }
    }

    /// Rectangle midpoint or disk center.
    pub fn center(&self) -> Complex64 {
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => Complex64::new(0.5 * (re_min + re_max), 0.5 * (im_min + im_max)),
            Shape::Disk { center, .. } => center,
        }
    }

    /// Characteristic size, used for relative slack.
    pub fn extent(&self) -> f64 {
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => (re_max - re_min).max(im_max - im_min) + re_min.abs().max(re_max.abs()) + im_min.abs().max(im_max.abs()),
            Shape::Disk { center, radius } => radius + center.norm(),
        }
    }

    pub fn point(&self, idx: usize) -> Complex64 {
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => {
                let i = idx % self.n1;
                let j = idx / self.n1;
                Complex64::new(
                    lerp(re_min, re_max, i, self.n1),
                    lerp(im_min, im_max, j, self.n2),
                )
            }
            Shape::Disk { center, radius } => {
                if idx == 0 {
                    return center;
                }
                let (ring, j) = self.disk_coords(idx);
                let r = lerp(0.0, radius, ring, self.n1);
                let theta = 2.0 * PI * j as f64 / self.n2 as f64;
                center + Complex64::from_polar(r, theta)
            }
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    fn disk_coords(&self, idx: usize) -> (usize, usize) {
        ((idx - 1) / self.n2 + 1, (idx - 1) % self.n2)
    }

    fn disk_index(&self, ring: usize, j: usize) -> usize {
        if ring == 0 {
            0
        } else {
            1 + (ring - 1) * self.n2 + j % self.n2
        }
    }

    /// Whether grid point `idx` lies on the outer ring of the grid.
    pub fn is_boundary_index(&self, idx: usize) -> bool {
        match self.shape {
            Shape::Rect { .. } => {
                let i = idx % self.n1;
                let j = idx / self.n1;
                i == 0 || j == 0 || i == self.n1 - 1 || j == self.n2 - 1
            }
            Shape::Disk { .. } => idx != 0 && self.disk_coords(idx).0 == self.n1 - 1,
        }
    }

    /// Grid neighbours of `idx` (8-neighbourhood; the disk center touches the whole first ring).
    pub fn neighbors(&self, idx: usize) -> Vec<usize> {
        match self.shape {
            Shape::Rect { .. } => {
                let i = (idx % self.n1) as isize;
                let j = (idx / self.n1) as isize;
                let mut out = Vec::with_capacity(8);
                for dj in -1..=1 {
                    for di in -1..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let (a, b) = (i + di, j + dj);
                        if a >= 0 && b >= 0 && (a as usize) < self.n1 && (b as usize) < self.n2 {
                            out.push(b as usize * self.n1 + a as usize);
                        }
                    }
                }
                out
            }
            Shape::Disk { .. } => {
                if idx == 0 {
                    return (0..self.n2).map(|j| self.disk_index(1, j)).collect();
                }
                let (ring, j) = self.disk_coords(idx);
                let mut out = Vec::with_capacity(8);
                for dr in -1isize..=1 {
                    let r = ring as isize + dr;
                    if r < 0 || r as usize >= self.n1 {
                        continue;
                    }
                    if r == 0 {
                        out.push(0);
                        continue;
                    }
                    for dj in -1isize..=1 {
                        if dr == 0 && dj == 0 {
                            continue;
                        }
                        let jj = (j as isize + dj).rem_euclid(self.n2 as isize) as usize;
                        let n = self.disk_index(r as usize, jj);
                        if n != idx && !out.contains(&n) {
                            out.push(n);
                        }
                    }
                }
                out
            }
        }
    }

    /// Membership in the closed region, with rounding slack.
    pub fn contains(&self, z: Complex64) -> bool {
        let slack = 1e-12 * self.extent();
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => {
                z.re >= re_min - slack && z.re <= re_max + slack && z.im >= im_min - slack && z.im <= im_max + slack
            }
            Shape::Disk { center, radius } => (z - center).norm() <= radius + slack,
        }
    }

    /// Within half a grid step of the boundary.
    pub fn near_boundary(&self, z: Complex64) -> bool {
        let (dx, dy) = self.steps();
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => {
                z.re - re_min < 0.5 * dx
                    || re_max - z.re < 0.5 * dx
                    || z.im - im_min < 0.5 * dy
                    || im_max - z.im < 0.5 * dy
            }
            Shape::Disk { center, radius } => radius - (z - center).norm() < 0.5 * dx,
        }
    }

    /// Distance from an interior point to the region boundary (0 outside).
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match self.shape {
            Shape::Rect {
                re_min,
                re_max,
                im_min,
                im_max,
            } => (z.re - re_min)
                .min(re_max - z.re)
                .min(z.im - im_min)
                .min(im_max - z.im)
                .max(0.0),
            Shape::Disk { center, radius } => (radius - (z - center).norm()).max(0.0),
        }
    }

    /// Seeded pseudo-random points strictly inside the region.
    pub fn interior_samples(&self, count: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| match self.shape {
                Shape::Rect {
                    re_min,
                    re_max,
                    im_min,
                    im_max,
                } => {
                    let u: f64 = rng.random();
                    let v: f64 = rng.random();
                    Complex64::new(
                        re_min + (re_max - re_min) * (0.01 + 0.98 * u),
                        im_min + (im_max - im_min) * (0.01 + 0.98 * v),
                    )
                }
                Shape::Disk { center, radius } => {
                    let u: f64 = rng.random();
                    let v: f64 = rng.random();
                    center + Complex64::from_polar(0.98 * radius * u.sqrt(), 2.0 * PI * v)
                }
            })
            .collect()
    }
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64 / (n - 1) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_grid_hits_landmarks_exactly() {
        let r = Region::rect((-2.0, 2.0), (-2.0, 2.0), 201, 201).unwrap();
        let pts = r.points();
        assert_eq!(pts.len(), 201 * 201);
        assert_eq!(pts[0], Complex64::new(-2.0, -2.0));
        assert_eq!(pts[100 * 201 + 100], Complex64::new(0.0, 0.0));
        assert_eq!(pts[100 * 201 + 150], Complex64::new(1.0, 0.0));
        assert!(r.is_boundary_index(0));
        assert!(!r.is_boundary_index(100 * 201 + 100));
    }

    #[test]
    fn disk_layout_and_boundary() {
        let r = Region::disk(Complex64::new(0.0, 0.0), 0.95, 51, 64).unwrap();
        assert_eq!(r.len(), 1 + 50 * 64);
        assert_eq!(r.point(0), Complex64::new(0.0, 0.0));
        assert!((r.point(r.len() - 1).norm() - 0.95).abs() < 1e-15);
        assert!(r.is_boundary_index(r.len() - 1));
        assert!(!r.is_boundary_index(1));
        assert_eq!(r.neighbors(0).len(), 64);
        assert!(r.neighbors(1).contains(&0));
    }

    #[test]
    fn rejects_degenerate_regions() {
        assert!(Region::rect((1.0, 1.0), (0.0, 1.0), 10, 10).is_err());
        assert!(Region::rect((0.0, 1.0), (0.0, 1.0), 1, 10).is_err());
        assert!(Region::disk(Complex64::new(0.0, 0.0), 0.0, 10, 10).is_err());
        assert!(Region::rect((0.0, 1.0), (0.0, 1.0), 3000, 3000).is_err());
    }

    #[test]
    fn samples_are_interior_and_reproducible() {
        let r = Region::disk(Complex64::new(1.0, -1.0), 0.5, 10, 10).unwrap();
        let a = r.interior_samples(64, DEFAULT_SEED);
        assert_eq!(a, r.interior_samples(64, DEFAULT_SEED));
        assert!(a.iter().all(|&z| r.contains(z) && r.boundary_distance(z) > 0.0));
    }

    #[test]
    fn rect_neighbors_at_corner_and_center() {
        let r = Region::rect((0.0, 1.0), (0.0, 1.0), 5, 5).unwrap();
        assert_eq!(r.neighbors(0).len(), 3);
        assert_eq!(r.neighbors(12).len(), 8);
    }
}
