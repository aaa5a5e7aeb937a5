use super::CMatrix;

/// Scale until the Frobenius norm (an upper bound on the operator norm) is at most this.
const SCALE_THRESHOLD: f64 = 0.5;
/// Stop summing once a term is this small relative to the partial sum.
const TERM_CUTOFF: f64 = 1e-17;
const MAX_TERMS: usize = 60;

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
pub fn matrix_exp(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let mut squarings = 0i32;
    while norm * 0.5f64.powi(squarings) > SCALE_THRESHOLD {
        squarings += 1;
    }
    let b = a.scale_real(0.5f64.powi(squarings));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &b).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        let t = term.frobenius_norm();
        if t == 0.0 || t < TERM_CUTOFF * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
