use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use num_complex::Complex64;
use serde::Serialize;
use svfield::linalg::{operator_norm, CMatrix};
use svfield::mfunc::{parse_scenario, MatrixFunction, Scenario, DEFAULT_SEED};
use svfield::principles::{
    check_factorization, check_max_direction, check_mean_value_identity, check_min_principle, constancy_report,
    locate_extremum, scan_field, ExtremumKind, Verdict, VerificationReport, DEFAULT_DERIVATIVE_ORDERS,
    DEFAULT_SAMPLES, DEFAULT_TAU,
};
use svfield::spectral::{
    cauchy_exp_reconstruction, exp_halfplane_example, laplace_identity_check, resolvent_derivative_identity,
    resolvent_extrema_check, CAUCHY_EXP_NODES, DEFAULT_STEP,
};

use crate::args::{CheckName, Common, ExtremaArgs, ScanArgs, VerifyArgs};
use crate::manifest::{CheckRecord, RunManifest};
use crate::output::{emit, field_csv, write_atomic};

const MEAN_VALUE_ORDER: usize = 16;
const MEAN_VALUE_NODES: usize = 256;
const LAPLACE_EPS: f64 = 1e-10;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse { path: String, message: String },
    Io { path: String, error: std::io::Error },
    Inapplicable(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Parse { .. } => 2,
            Failure::Io { .. } => 3,
            Failure::Inapplicable(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Parse { path, message } => write!(f, "{path}: {message}"),
            Failure::Io { path, error } => write!(f, "{path}: {error}"),
            Failure::Inapplicable(m) => write!(f, "check not applicable: {m}"),
        }
    }
}

fn io_failure(path: &Path, error: std::io::Error) -> Failure {
    Failure::Io {
        path: path.display().to_string(),
        error,
    }
}

fn inapplicable(e: impl fmt::Display) -> Failure {
    Failure::Inapplicable(e.to_string())
}

struct Loaded {
    scenario: Scenario,
    manifest: RunManifest,
}

fn load(command: &str, common: &Common) -> Result<Loaded, Failure> {
    let path = &common.scenario;
    let bytes = std::fs::read(path).map_err(|e| io_failure(path, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Parse {
        path: path.display().to_string(),
        message: "scenario is not valid UTF-8".into(),
    })?;
    let scenario = parse_scenario(&text).map_err(|e| Failure::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(Loaded {
        scenario,
        manifest: RunManifest::new(command, &path.display().to_string(), &bytes),
    })
}

fn finish(common: &Common, mut manifest: RunManifest, contents: &[u8]) -> Result<(), Failure> {
    if let Some(out) = &common.out {
        write_atomic(out, contents).map_err(|e| io_failure(out, e))?;
    }
    manifest.record_output(common.out.as_deref(), contents);
    if let Some(path) = &common.manifest {
        let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        json.push(b'\n');
        write_atomic(path, &json).map_err(|e| io_failure(path, e))?;
    }
    if common.out.is_none() {
        emit(None, contents).map_err(|e| io_failure(Path::new("<stdout>"), e))?;
    }
    Ok(())
}

pub fn scan(args: &ScanArgs) -> Result<ExitCode, Failure> {
    let Loaded { scenario, manifest } = load("scan", &args.common)?;
    let ks = args.k.indices(scenario.function.dim()).map_err(Failure::Usage)?;
    let field = scan_field(&scenario.function, &scenario.region).map_err(inapplicable)?;
    finish(&args.common, manifest, field_csv(&field, &ks).as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

pub fn extrema(args: &ExtremaArgs) -> Result<ExitCode, Failure> {
    let Loaded { scenario, manifest } = load("extrema", &args.common)?;
    let f = &scenario.function;
    let ks = args.k.indices(f.dim()).map_err(Failure::Usage)?;
    let field = scan_field(f, &scenario.region).map_err(inapplicable)?;
    let mut reports = Vec::with_capacity(2 * ks.len());
    for k in ks {
        for kind in [ExtremumKind::Max, ExtremumKind::Min] {
            let rep = locate_extremum(&field, f, k, kind)
                .ok_or_else(|| Failure::Inapplicable("every grid point is singular".into()))?;
            reports.push(rep);
        }
    }
    finish(&args.common, manifest, &pretty(&reports))?;
    Ok(ExitCode::SUCCESS)
}

fn pretty<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut json = serde_json::to_vec_pretty(value).expect("report serializes");
    json.push(b'\n');
    json
}

/// `A` for the spectral checks: a named binding, or the matrix the function is built from.
fn spectral_matrix<'a>(scenario: &'a Scenario, name: Option<&str>) -> Result<&'a CMatrix, Failure> {
    match name {
        Some(name) => scenario
            .bindings
            .get(name)
            .ok_or_else(|| Failure::Usage(format!("no matrix named {name:?} in the scenario"))),
        None => scenario.function.base_matrix().ok_or_else(|| {
            Failure::Inapplicable(format!(
                "a {} function has no underlying matrix; pass --matrix NAME",
                scenario.function.kind()
            ))
        }),
    }
}

fn run_check(args: &VerifyArgs, scenario: &Scenario) -> Result<VerificationReport, Failure> {
    let f = &scenario.function;
    let region = &scenario.region;
    let z0 = args.z0.map(|c| c.0).unwrap_or_else(|| region.center());
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
    let vector = |default_unit: bool| -> Result<Option<Vec<Complex64>>, Failure> {
        match &args.x {
            Some(x) => x.resolve(f.dim()).map(Some).map_err(Failure::Usage),
            None if default_unit => {
                let mut e1 = vec![Complex64::new(0.0, 0.0); f.dim()];
                e1[0] = Complex64::new(1.0, 0.0);
                Ok(Some(e1))
            }
            None => Ok(None),
        }
    };

    let report = match args.check {
        CheckName::MeanValue => {
            let r = match args.r {
                Some(r) => r,
                None => 0.5 * region.boundary_distance(z0),
            };
            let x = vector(true)?.expect("defaulted");
            check_mean_value_identity(
                f,
                z0,
                r,
                &x,
                args.k_order.unwrap_or(MEAN_VALUE_ORDER),
                args.nodes.unwrap_or(MEAN_VALUE_NODES),
            )
            .map_err(inapplicable)?
        }
        CheckName::MaxDirection => {
            let x = vector(false)?;
            check_max_direction(
                f,
                region,
                z0,
                args.k_order.unwrap_or(DEFAULT_DERIVATIVE_ORDERS),
                x.as_deref(),
                samples,
                seed,
            )
            .map_err(inapplicable)?
        }
        CheckName::Factorize => {
            check_factorization(f, region, z0, args.tau.unwrap_or(DEFAULT_TAU), samples, seed).map_err(inapplicable)?
        }
        CheckName::Constancy => constancy_report(f, region).map_err(inapplicable)?,
        CheckName::MinPrinciple => check_min_principle(f, region).map_err(inapplicable)?,
        CheckName::Resolvent => {
            let a = spectral_matrix(scenario, args.matrix.as_deref())?;
            resolvent_extrema_check(a, region).map_err(inapplicable)?
        }
        CheckName::ResolventDerivative => {
            let a = spectral_matrix(scenario, args.matrix.as_deref())?;
            resolvent_derivative_identity(a, z0, args.h.unwrap_or(DEFAULT_STEP)).map_err(inapplicable)?
        }
        CheckName::Laplace => {
            let a = spectral_matrix(scenario, args.matrix.as_deref())?;
            let z = match args.z0 {
                Some(c) => c.0,
                None => Complex64::new(operator_norm(a).map_err(inapplicable)? + 1.0, 0.0),
            };
            laplace_identity_check(a, z, args.eps.unwrap_or(LAPLACE_EPS)).map_err(inapplicable)?
        }
        CheckName::Cauchy => {
            let a = spectral_matrix(scenario, args.matrix.as_deref())?;
            cauchy_exp_reconstruction(a, args.t.unwrap_or(1.0), args.r, args.nodes.unwrap_or(CAUCHY_EXP_NODES))
                .map_err(inapplicable)?
        }
        CheckName::ExpExample => {
            let expected = MatrixFunction::ExpFamily(CMatrix::from_real_diag(&[0.0, 1.0]));
            if *f != expected {
                return Err(Failure::Inapplicable(format!(
                    "exp-example needs the function expz(A) with A = diag(0, 1), found a {} function",
                    f.kind()
                )));
            }
            exp_halfplane_example(region).map_err(inapplicable)?
        }
    };
    Ok(report)
}

fn uses_seed(check: CheckName) -> bool {
    matches!(check, CheckName::MaxDirection | CheckName::Factorize)
}

pub fn verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let Loaded { scenario, mut manifest } = load("verify", &args.common)?;
    let report = run_check(args, &scenario)?;
    if uses_seed(args.check) {
        manifest.seed = Some(args.seed.unwrap_or(DEFAULT_SEED));
    }
    manifest.checks.push(CheckRecord::from(&report));
    finish(&args.common, manifest, &pretty(&report))?;
    Ok(ExitCode::from(match report.verdict {
        Verdict::Certified => 0,
        Verdict::Refuted => 1,
        Verdict::Inconclusive => 4,
    }))
}
