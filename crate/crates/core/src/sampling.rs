//! Seeded random matrices for checks and property tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, vec_norm, CMatrix};

/// Complex normal sample with independent standard normal parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with independent `complex_normal` entries.
pub fn random_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let data = (0..n * n).map(|_| complex_normal(rng)).collect();
    CMatrix::from_vec(n, data).expect("normal samples are finite")
}

/// Unitary matrix from Gram–Schmidt (applied twice) on a random matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        let g = random_matrix(n, rng);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let p = inner(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= p * qi;
                    }
                }
            }
            let norm = vec_norm(&v);
            if norm < 1e-8 {
                break;
            }
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
        if cols.len() == n {
            return CMatrix::from_columns(&cols);
        }
    }
}
