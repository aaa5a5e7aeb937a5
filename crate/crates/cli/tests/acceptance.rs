//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svfield::linalg::{det, operator_norm, svd, CMatrix};
use svfield::mfunc::{parse_scenario, MatrixFunction, Region, Scenario, DEFAULT_SEED};
use svfield::principles::{
    check_max_direction, check_mean_value_identity, constancy_report, factorize_at_max, locate_extremum, scan_field,
    ExtremumKind, Value, Verdict, VerificationReport, DEFAULT_SAMPLES, DEFAULT_TAU,
};
use svfield::sampling::{random_matrix, random_unitary};
use svfield::spectral::{
    cauchy_exp_reconstruction, exp_halfplane_example, laplace_identity_check, pseudospectra_field,
    resolvent_derivative_identity, resolvent_extrema_check, CAUCHY_EXP_NODES, DEFAULT_STEP,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn load(name: &str) -> Scenario {
    let text = std::fs::read_to_string(scenario_dir().join(name)).expect("scenario readable");
    parse_scenario(&text).expect("scenario parses")
}

fn corpus() -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut dirs = vec![scenario_dir()];
    while let Some(d) = dirs.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                dirs.push(p);
            } else if p.extension().is_some_and(|e| e == "svf") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn witness_matrix(report: &VerificationReport, name: &str) -> CMatrix {
    let Some(Value::Matrix(rows)) = report.witnesses.get(name) else {
        panic!("witness {name} is not a matrix");
    };
    let data: Vec<Complex64> = rows.iter().flatten().map(|z| c(z.re, z.im)).collect();
    CMatrix::from_vec(rows.len(), data).unwrap()
}

fn real_witness(report: &VerificationReport, name: &str) -> f64 {
    match report.witnesses.get(name) {
        Some(Value::Real(x)) => *x,
        other => panic!("witness {name} is {other:?}"),
    }
}

fn diag_one_z() -> MatrixFunction {
    load("constant_norm.svf").function
}

fn criterion_1() -> Outcome {
    let s = load("constant_norm.svf");
    let field = scan_field(&s.function, &s.region).map_err(|e| e.to_string())?;
    let (lo, hi) = field.range(1);
    ensure(field.flagged_count() == 0, || "unexpected flagged points".into())?;
    ensure(hi - lo <= 1e-10, || format!("s1 spread {:e}", hi - lo))?;
    let f0 = s.function.eval(field.points()[0]).unwrap();
    let deviation = field
        .points()
        .iter()
        .map(|&z| (&s.function.eval(z).unwrap() - &f0).frobenius_norm())
        .fold(0.0, f64::max);
    ensure(deviation >= 0.5, || format!("Frobenius deviation {deviation}"))?;
    Ok(format!("s1 spread {:e}, Frobenius deviation {deviation:.4}", hi - lo))
}

fn criterion_2() -> Outcome {
    let s = load("toy.svf");
    let f = &s.function;
    let field = scan_field(f, &s.region).map_err(|e| e.to_string())?;
    let m1 = locate_extremum(&field, f, 1, ExtremumKind::Min).ok_or("no s1 minimum")?;
    let m2 = locate_extremum(&field, f, 2, ExtremumKind::Min).ok_or("no s2 minimum")?;
    let d1 = m1.location.norm();
    let d2 = (m2.location - 1.0).norm();
    ensure(d1 <= 1e-4, || format!("s1 argmin {} is {d1:e} from 0", m1.location))?;
    ensure(d2 <= 1e-4, || format!("s2 argmin {} is {d2:e} from 1", m2.location))?;
    ensure(m2.value <= 1e-8, || format!("s2 min value {:e}", m2.value))?;
    let dt = det(&f.eval(c(1.0, 0.0)).unwrap()).norm();
    ensure(dt <= 1e-12, || format!("|det F(1)| = {dt:e}"))?;
    Ok(format!("|z1| = {d1:.1e}, |z2 - 1| = {d2:.1e}, s2 = {:.1e}, |det F(1)| = {dt:.1e}", m2.value))
}

fn criterion_3() -> Outcome {
    let f = load("toy.svf").function;
    let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
    let rep = check_mean_value_identity(&f, c(0.0, 0.0), 0.5, &e2, 2, 256).map_err(|e| e.to_string())?;
    let lhs = real_witness(&rep, "lhs");
    let rhs = real_witness(&rep, "rhs");
    // F(z)e2 = (z, z - 1), whose squared norm averages to 2r^2 + 1.
    let closed = 2.0 * 0.25 + 1.0;
    ensure((lhs - closed).abs() <= 1e-10, || format!("lhs {lhs} vs {closed}"))?;
    ensure((lhs - rhs).abs() <= 1e-10, || format!("lhs {lhs} vs rhs {rhs}"))?;
    ensure(rep.verdict == Verdict::Certified, || format!("verdict {:?}", rep.verdict))?;
    Ok(format!("lhs = {lhs}, rhs = {rhs}"))
}

fn criterion_4() -> Outcome {
    let f = diag_one_z();
    let region = load("constant_norm.svf").region;
    let rep = check_max_direction(&f, &region, c(0.0, 0.0), 6, None, DEFAULT_SAMPLES, DEFAULT_SEED)
        .map_err(|e| e.to_string())?;
    let sample_dev = rep.residual_value("sample_deviation").ok_or("no sample deviation")?;
    let deriv = rep.residual_value("derivative_max").ok_or("no derivative residual")?;
    ensure(sample_dev <= 1e-10, || format!("sample deviation {sample_dev:e}"))?;
    ensure(deriv <= 1e-8, || format!("derivative norm {deriv:e}"))?;
    // Independent route: x0 = e1 up to phase, so F(z)x0 is the fixed vector e1.
    let x0 = [c(1.0, 0.0), c(0.0, 0.0)];
    let direct = region
        .interior_samples(DEFAULT_SAMPLES, DEFAULT_SEED)
        .into_iter()
        .map(|z| {
            let y = f.eval(z).unwrap().mul_vec(&x0);
            ((y[0] - 1.0).norm().powi(2) + y[1].norm().powi(2)).sqrt()
        })
        .fold(0.0, f64::max);
    ensure(direct <= 1e-10, || format!("direct deviation {direct:e}"))?;
    ensure(rep.verdict == Verdict::Certified, || format!("verdict {:?}", rep.verdict))?;
    Ok(format!("sample deviation {sample_dev:e}, max derivative norm {deriv:e}"))
}

/// `U₀·blockdiag(σI_d, C₀ + (z/2)·B/‖B‖)·V₀` as a dense Taylor polynomial.
fn factorization_instance(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (MatrixFunction, CMatrix, f64) {
    let sigma = rng.random_range(1.0..3.0);
    let m = n - d;
    let mut c0 = random_matrix(m, rng);
    c0 = c0.scale_real(rng.random_range(0.05..0.25) / operator_norm(&c0).unwrap());
    let mut b = random_matrix(m, rng);
    b = b.scale_real(0.5 / operator_norm(&b).unwrap());
    let top = CMatrix::from_real_diag(&vec![sigma; d]);
    let u0 = random_unitary(n, rng);
    let v0 = random_unitary(n, rng);
    let lift = |blk: &CMatrix, s: &CMatrix| &(&u0 * &CMatrix::block_diag(&[s.clone(), blk.clone()])) * &v0;
    let coeffs = vec![lift(&c0, &top), lift(&b, &CMatrix::zeros(d))];
    let f = MatrixFunction::taylor(c(0.0, 0.0), coeffs, f64::INFINITY).unwrap();
    (f, v0, sigma)
}

/// Projector onto the span of the first `d` rows of `v`, conjugated.
fn row_projector(v: &CMatrix, d: usize) -> CMatrix {
    let n = v.dim();
    let mut p = CMatrix::zeros(n);
    for j in 0..d {
        let row = v.row(j);
        let x: Vec<Complex64> = row.iter().map(|z| z.conj()).collect();
        for a in 0..n {
            for b in 0..n {
                p[(a, b)] += x[a] * x[b].conj();
            }
        }
    }
    p
}

fn criterion_5() -> Outcome {
    let region = Region::disk(c(0.0, 0.0), 0.9, 31, 48).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst_sigma: f64 = 0.0;
    let mut worst_off: f64 = 0.0;
    let mut worst_subspace: f64 = 0.0;
    for case in 0..20 {
        let n = 3 + case % 2;
        let d = 1 + (case / 2) % 2;
        let (f, v0, sigma) = factorization_instance(&mut rng, n, d);
        let fac = factorize_at_max(&f, &region, c(0.0, 0.0), DEFAULT_TAU, DEFAULT_SAMPLES, DEFAULT_SEED + case as u64)
            .map_err(|e| format!("case {case}: {e}"))?;
        ensure(fac.d == d, || format!("case {case}: recovered d = {}, expected {d}", fac.d))?;
        ensure(fac.samples_used == DEFAULT_SAMPLES, || format!("case {case}: {} samples", fac.samples_used))?;
        worst_sigma = worst_sigma.max((fac.sigma - sigma).abs());
        worst_off = worst_off.max(fac.residual_offdiag);
        // The maximizing subspace is unique even though the basis is not.
        let gap = (&row_projector(&fac.v, d) - &row_projector(&v0, d)).frobenius_norm();
        worst_subspace = worst_subspace.max(gap);
    }
    ensure(worst_sigma <= 1e-10, || format!("sigma error {worst_sigma:e}"))?;
    ensure(worst_off <= 1e-8, || format!("off-diagonal residual {worst_off:e}"))?;
    ensure(worst_subspace <= 1e-8, || format!("subspace mismatch {worst_subspace:e}"))?;
    Ok(format!(
        "20/20 d exact, sigma error {worst_sigma:.1e}, off-diagonal {worst_off:.1e}, subspace {worst_subspace:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst_rel: f64 = 0.0;
    let mut worst_unitary: f64 = 0.0;
    let mut worst_recon: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    for _ in 0..1000 {
        let a = random_matrix(2, &mut rng);
        let dec = svd(&a).map_err(|e| e.to_string())?;
        // Eigenvalues of A*A from its characteristic polynomial λ² − ‖A‖_F²λ + |det A|².
        let fro2 = a.frobenius_norm().powi(2);
        let d = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
        let disc = (fro2 * fro2 - 4.0 * d * d).max(0.0).sqrt();
        let s1 = (0.5 * (fro2 + disc)).sqrt();
        let s2 = d / s1;
        worst_rel = worst_rel.max(((dec.s[0] - s1) / s1).abs()).max(((dec.s[1] - s2) / s2).abs());
        worst_unitary = worst_unitary.max(dec.u.unitarity_residual()).max(dec.v.unitarity_residual());
        let recon = &(&dec.u * &CMatrix::from_real_diag(&dec.s)) * &dec.v;
        worst_recon = worst_recon.max((&recon - &a).frobenius_norm() / a.frobenius_norm());
        let prod: f64 = dec.s.iter().product();
        worst_det = worst_det.max((prod - det(&a).norm()).abs() / prod.max(1.0));
    }
    ensure(worst_rel <= 1e-10, || format!("relative singular value error {worst_rel:e}"))?;
    ensure(worst_unitary <= 1e-12, || format!("unitarity residual {worst_unitary:e}"))?;
    ensure(worst_recon <= 1e-12, || format!("reconstruction residual {worst_recon:e}"))?;
    ensure(worst_det <= 1e-8, || format!("|det| mismatch {worst_det:e}"))?;
    Ok(format!(
        "rel {worst_rel:.1e}, unitarity {worst_unitary:.1e}, reconstruction {worst_recon:.1e}, det {worst_det:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut passed = 0;
    let mut worst_derivative: f64 = 0.0;
    let mut least_margin = f64::INFINITY;
    for case in 0..20u64 {
        let n = 2 + (case % 3) as usize;
        let a = random_matrix(n, &mut rng);
        let left = operator_norm(&a).unwrap() + rng.random_range(0.05..0.5);
        let region = Region::rect((left, left + 2.0), (-1.0, 1.0), 101, 101).unwrap();
        let ps = pseudospectra_field(&a, &region).map_err(|e| e.to_string())?;
        let margin = ps.min().1;
        least_margin = least_margin.min(margin);
        ensure(margin >= 1e-3, || format!("case {case}: margin {margin:e}"))?;

        let rep = resolvent_extrema_check(&a, &region).map_err(|e| format!("case {case}: {e}"))?;
        let flag = |name: &str| matches!(rep.witnesses.get(name), Some(Value::Bool(true)));
        // Dual route: ‖R_A(z)‖ = 1/s_n(A − zI), so both grid optima sit at s_n extremes of the pencil.
        let argmin = (0..ps.values.len()).min_by(|&i, &j| ps.values[i].total_cmp(&ps.values[j])).unwrap();
        let argmax = (0..ps.values.len()).max_by(|&i, &j| ps.values[i].total_cmp(&ps.values[j])).unwrap();
        let dual = region.is_boundary_index(argmin) && region.is_boundary_index(argmax);
        if rep.verdict == Verdict::Certified && flag("max_s1_grid_on_boundary") && flag("min_sn_grid_on_boundary") && dual
        {
            passed += 1;
        }
        for z in region.interior_samples(5, DEFAULT_SEED + case) {
            let d = resolvent_derivative_identity(&a, z, DEFAULT_STEP).map_err(|e| format!("case {case}: {e}"))?;
            worst_derivative = worst_derivative.max(d.residual_value("resolvent_difference").unwrap());
        }
    }
    ensure(passed == 20, || format!("{passed}/20 cases with both extrema on the boundary"))?;
    ensure(worst_derivative <= 1e-6, || format!("R' = R^2 residual {worst_derivative:e}"))?;
    Ok(format!(
        "20/20 on boundary, least margin {least_margin:.3}, R' residual {worst_derivative:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let jordan = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let cases = [
        (CMatrix::from_real_diag(&[0.0, 0.5]), CMatrix::from_real_diag(&[0.5, 2.0 / 3.0])),
        (jordan, CMatrix::from_real_rows(&[&[0.5, 0.25], &[0.0, 0.5]]).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (a, closed) in cases {
        let rep = laplace_identity_check(&a, c(2.0, 0.0), 1e-10).map_err(|e| e.to_string())?;
        let err = (&witness_matrix(&rep, "quadrature") - &closed).frobenius_norm();
        ensure(err <= 1e-8, || format!("quadrature error {err:e}"))?;
        ensure(rep.verdict == Verdict::Certified, || format!("verdict {:?}", rep.verdict))?;
        worst = worst.max(err);
    }
    Ok(format!("max error {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let jordan = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let mut worst_ratio: f64 = 0.0;
    for t in [1.0f64, 2.0] {
        let closed = [
            (CMatrix::zeros(2), CMatrix::identity(2)),
            (jordan.clone(), CMatrix::from_real_rows(&[&[1.0, t], &[0.0, 1.0]]).unwrap()),
            (CMatrix::from_real_diag(&[0.0, 1.0]), CMatrix::from_real_diag(&[1.0, t.exp()])),
        ];
        for (a, exp_ta) in closed {
            let rep = cauchy_exp_reconstruction(&a, t, None, CAUCHY_EXP_NODES).map_err(|e| e.to_string())?;
            let r = operator_norm(&a).unwrap() + 1.0;
            let bound = 1e-8 * (t * r).exp();
            let err = (&witness_matrix(&rep, "quadrature") - &exp_ta).frobenius_norm();
            ensure(err <= bound, || format!("t = {t}: error {err:e} exceeds {bound:e}"))?;
            ensure(rep.verdict == Verdict::Certified, || format!("verdict {:?}", rep.verdict))?;
            worst_ratio = worst_ratio.max(err / bound);
        }
    }
    Ok(format!("worst error / bound = {worst_ratio:.1e}"))
}

fn criterion_10() -> Outcome {
    let s = load("exp_halfplane.svf");
    let expected = MatrixFunction::ExpFamily(CMatrix::from_real_diag(&[0.0, 1.0]));
    ensure(s.function == expected, || "scenario is not expz(diag(0, 1))".into())?;
    let rep = exp_halfplane_example(&s.region).map_err(|e| e.to_string())?;
    let closed = rep.residual_value("s1_closed_form").ok_or("no closed-form residual")?;
    ensure(closed <= 1e-10, || format!("|s1 - max(1, e^Re z)| = {closed:e}"))?;
    let field = scan_field(&s.function, &s.region).map_err(|e| e.to_string())?;
    let left: Vec<f64> = (0..field.len())
        .filter(|&i| field.points()[i].re <= -0.1)
        .map(|i| field.value(1, i).unwrap())
        .collect();
    let spread = left.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - left.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(!left.is_empty() && spread <= 1e-12, || format!("left sub-grid spread {spread:e}"))?;
    ensure(rep.verdict == Verdict::Certified, || format!("verdict {:?}", rep.verdict))?;
    Ok(format!("closed form {closed:.1e}, left spread {spread:.1e} over {} points", left.len()))
}

fn criterion_11() -> Outcome {
    let mut with_booleans = 0;
    let mut skipped = Vec::new();
    for path in corpus() {
        let text = std::fs::read_to_string(&path).unwrap();
        let s = parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let rep = constancy_report(&s.function, &s.region).map_err(|e| format!("{}: {e}", path.display()))?;
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let Some(Value::List(conds)) = rep.witnesses.get("conditions") else {
            skipped.push(name);
            continue;
        };
        let bools: Vec<bool> = conds.iter().map(|v| matches!(v, Value::Bool(true))).collect();
        ensure(bools.len() == 5, || format!("{name}: {} conditions", bools.len()))?;
        ensure(bools.iter().all(|&b| b == bools[0]), || format!("{name}: conditions disagree: {bools:?}"))?;
        ensure(rep.residual_value("disagreements") == Some(0.0), || format!("{name}: disagreement residual"))?;
        with_booleans += 1;
    }
    ensure(with_booleans >= 10, || format!("only {with_booleans} scenarios evaluated"))?;
    Ok(format!(
        "{with_booleans} scenarios coherent; singular on grid (no booleans): {}",
        skipped.join(", ")
    ))
}

fn scan_with_threads(threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_svfield"))
        .env("SVFIELD_THREADS", threads)
        .arg("scan")
        .arg(scenario_dir().join("constant_norm.svf"))
        .args(["--k", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn criterion_12() -> Outcome {
    let one = scan_with_threads("1")?;
    let four = scan_with_threads("4")?;
    ensure(!one.is_empty(), || "empty CSV".into())?;
    ensure(one == four, || "CSV differs between 1 and 4 threads".into())?;
    let rows = one.iter().filter(|&&b| b == b'\n').count();
    Ok(format!("{} bytes, {rows} lines identical", one.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("constant operator norm of diag(1, z)", criterion_1),
        ("interior minima of the toy family", criterion_2),
        ("mean-value identity", criterion_3),
        ("fixed maximizing direction", criterion_4),
        ("factorization recovery", criterion_5),
        ("SVD oracle suite", criterion_6),
        ("resolvent extrema on the boundary", criterion_7),
        ("Laplace transform of exp(tA)", criterion_8),
        ("Cauchy reconstruction of exp(tA)", criterion_9),
        ("exp(z diag(0, 1)) half-plane example", criterion_10),
        ("constancy equivalences over the corpus", criterion_11),
        ("thread-count determinism", criterion_12),
    ];
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if failures.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failures:?}");
        std::process::exit(1);
    }
}
