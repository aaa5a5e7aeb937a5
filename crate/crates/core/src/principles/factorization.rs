use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    interior_extremum, scan_field, ExtremumKind, PrinciplesError, Verdict, VerificationReport, DEFAULT_SAMPLES,
    MAX_SLACK,
};
use crate::linalg::{singular_values, svd, CMatrix};
use crate::mfunc::{MatrixFunction, Region, DEFAULT_SEED};

/// `F(z) = U·blockdiag(σ·I_d, R(z))·V` recovered from the SVD at a maximum of `s₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub z0: Complex64,
    pub d: usize,
    pub sigma: f64,
    pub u: CMatrix,
    pub v: CMatrix,
    /// Largest off-diagonal block of `U*·F(z)·V*` over the samples.
    pub residual_offdiag: f64,
    /// Largest `‖G₁₁(z) − σ·I_d‖_F` over the samples.
    pub residual_topblock: f64,
    /// Largest `|s_j(F(z)) − σ|`, `j ≤ d`, over the samples.
    pub residual_top_singular: f64,
    /// `z ↦ R(z)`, present when `d < n`.
    pub inner: Option<MatrixFunction>,
    pub samples_used: usize,
}

struct SampleResidual {
    top: f64,
    off: f64,
    top_sv: f64,
    z: Complex64,
}

/// Factors `F` at `z₀`, which must maximize the `s₁` field on the grid.
///
/// `d` is the number of singular values of `F(z₀)` within relative `τ` of
/// the largest. The factorization is verified at `samples` seeded interior
/// points; residuals above `1e-6·σ` are reported as an error since they
/// contradict the factorization theorem.
pub fn factorize_at_max(
    f: &MatrixFunction,
    region: &Region,
    z0: Complex64,
    tau: f64,
    samples: usize,
    seed: u64,
) -> Result<Factorization, PrinciplesError> {
    let n = f.dim();
    let dec = svd(&f.eval(z0)?)?;
    let sigma = dec.s[0];
    if sigma == 0.0 {
        return Err(crate::linalg::LinalgError::ZeroMatrix.into());
    }
    let d = dec.s.iter().take_while(|&&s| s >= sigma * (1.0 - tau)).count();

    let field = scan_field(f, region)?;
    let (_, s1_max) = field.range(1);
    if s1_max > sigma + MAX_SLACK * sigma.max(1.0) {
        let witness = (0..field.len())
            .find(|&i| field.value(1, i) == Some(s1_max))
            .map(|i| region.point(i))
            .unwrap_or(z0);
        return Err(PrinciplesError::NotAMaximum {
            z0,
            value: sigma,
            witness,
            witness_value: s1_max,
        });
    }

    let ua = dec.u.adjoint();
    let va = dec.v.adjoint();
    let pts = region.interior_samples(samples, seed);
    let per_point: Vec<SampleResidual> = pts
        .par_iter()
        .filter_map(|&z| {
            let fz = f.eval(z).ok()?;
            let g = &(&ua * &fz) * &va;
            let top = (&g.principal_block(0, d) - &CMatrix::identity(d).scale_real(sigma)).frobenius_norm();
            let off = if d < n {
                g.block_frobenius(0..d, d..n).max(g.block_frobenius(d..n, 0..d))
            } else {
                0.0
            };
            let s = singular_values(&fz).ok()?;
            let top_sv = s[..d].iter().map(|sj| (sj - sigma).abs()).fold(0.0, f64::max);
            Some(SampleResidual { top, off, top_sv, z })
        })
        .collect();
    if per_point.is_empty() {
        return Err(PrinciplesError::EmptyDomain);
    }
    let worst = per_point
        .iter()
        .max_by(|a, b| a.top.max(a.off).total_cmp(&b.top.max(b.off)))
        .expect("nonempty");
    let residual_topblock = per_point.iter().map(|p| p.top).fold(0.0, f64::max);
    let residual_offdiag = per_point.iter().map(|p| p.off).fold(0.0, f64::max);
    let residual_top_singular = per_point.iter().map(|p| p.top_sv).fold(0.0, f64::max);
    let tolerance = 1e-6 * sigma;
    if residual_topblock.max(residual_offdiag) > tolerance {
        return Err(PrinciplesError::FactorizationFailed {
            residual: residual_topblock.max(residual_offdiag),
            tolerance,
            witness: worst.z,
        });
    }

    let inner = if d < n {
        let conj = MatrixFunction::unitary_conjugate(ua, f.clone(), va)?;
        Some(MatrixFunction::principal(conj, d, n - d)?)
    } else {
        None
    };
    Ok(Factorization {
        z0,
        d,
        sigma,
        u: dec.u,
        v: dec.v,
        residual_offdiag,
        residual_topblock,
        residual_top_singular,
        inner,
        samples_used: per_point.len(),
    })
}

/// [`factorize_at_max`] as a verification report.
pub fn check_factorization(
    f: &MatrixFunction,
    region: &Region,
    z0: Complex64,
    tau: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, PrinciplesError> {
    let mut report = VerificationReport::new("factorize");
    report
        .param("z0", z0)
        .param("tau", tau)
        .param("samples", samples)
        .param("seed", seed);
    match factorize_at_max(f, region, z0, tau, samples, seed) {
        Ok(fac) => {
            let tol = 1e-6 * fac.sigma;
            report
                .witness("d", fac.d)
                .witness("sigma", fac.sigma)
                .witness("U", &fac.u)
                .witness("V", &fac.v)
                .witness("samples_used", fac.samples_used)
                .residual("offdiag", fac.residual_offdiag, Some(tol))
                .residual("topblock", fac.residual_topblock, Some(tol))
                .residual("top_singular_values", fac.residual_top_singular, Some(tol));
            if let Some(inner) = &fac.inner {
                report.witness("inner_dimension", inner.dim());
            }
            report.settle();
        }
        Err(PrinciplesError::NotAMaximum {
            value,
            witness,
            witness_value,
            ..
        }) => {
            report
                .witness("sigma", value)
                .witness("exceeding_point", witness)
                .witness("exceeding_value", witness_value)
                .set_verdict(Verdict::Inconclusive)
                .reason("z0 is not a maximum of the s1 field on this region");
        }
        Err(PrinciplesError::FactorizationFailed {
            residual,
            tolerance,
            witness,
        }) => {
            report
                .residual("block_structure", residual, Some(tolerance))
                .witness("violating_point", witness)
                .set_verdict(Verdict::Refuted)
                .reason("U*F(z)V* is not block diagonal with a scalar top block");
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IteratedFactorization {
    /// `(d_j, σ_j, z_j)` for each peeled block.
    pub chain: Vec<(usize, f64, Complex64)>,
    /// Remaining block without an interior maximum; `None` when everything was peeled.
    pub residual: Option<MatrixFunction>,
}

/// Repeatedly factors the current lower-right block at an interior maximum of its `s₁`.
pub fn iterated_factorization(
    f: &MatrixFunction,
    region: &Region,
    tau: f64,
) -> Result<IteratedFactorization, PrinciplesError> {
    let mut chain = Vec::new();
    let mut current = f.clone();
    for _ in 0..f.dim() {
        let field = scan_field(&current, region)?;
        let Some(ext) = interior_extremum(&field, &current, 1, ExtremumKind::Max) else {
            return Ok(IteratedFactorization {
                chain,
                residual: Some(current),
            });
        };
        let fac = factorize_at_max(&current, region, ext.location, tau, DEFAULT_SAMPLES, DEFAULT_SEED)?;
        chain.push((fac.d, fac.sigma, fac.z0));
        match fac.inner {
            Some(inner) => current = inner,
            None => return Ok(IteratedFactorization { chain, residual: None }),
        }
    }
    unreachable!("each step peels at least one dimension")
}
