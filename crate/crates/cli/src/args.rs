use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(name = "svfield", version, about = "Singular-value fields of matrix-valued analytic functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate s_1..s_n on the scenario grid and write CSV.
    Scan(ScanArgs),
    /// Locate the refined maximum and minimum of each requested field.
    Extrema(ExtremaArgs),
    /// Run a named check and print its JSON report.
    Verify(Box<VerifyArgs>),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file.
    pub scenario: PathBuf,
    /// Output file; stdout when omitted. Written atomically.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a JSON run manifest here.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    /// Which singular values to emit: `all` or an index from 1.
    #[arg(long, default_value = "all")]
    pub k: KSelector,
}

#[derive(Debug, Args)]
pub struct ExtremaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "all")]
    pub k: KSelector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    MeanValue,
    MaxDirection,
    Factorize,
    Constancy,
    MinPrinciple,
    Resolvent,
    ResolventDerivative,
    Laplace,
    Cauchy,
    ExpExample,
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub check: CheckName,
    /// Base point `re,im`; defaults to the region center.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<ComplexArg>,
    /// Circle radius (mean-value) or contour radius (cauchy).
    #[arg(long)]
    pub r: Option<f64>,
    /// Taylor truncation order (mean-value, default 16) or derivative orders (max-direction, default 6).
    #[arg(long = "K")]
    pub k_order: Option<usize>,
    /// Quadrature nodes (mean-value default 256, cauchy default 512).
    #[arg(long = "N")]
    pub nodes: Option<usize>,
    /// Relative multiplicity tolerance for the top singular value.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Seeded interior sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Vector for mean-value / max-direction: `e<k>` or entries `a;b;...` with each entry `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<VectorArg>,
    /// Time for the cauchy check.
    #[arg(long)]
    pub t: Option<f64>,
    /// Tail tolerance for the laplace check.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Difference step for resolvent-derivative.
    #[arg(long)]
    pub h: Option<f64>,
    /// Named matrix binding used as A; defaults to the function's own matrix.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSelector {
    All,
    Index(usize),
}

impl FromStr for KSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(KSelector::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(KSelector::Index(k)),
            _ => Err(format!("expected `all` or a positive integer, got {s:?}")),
        }
    }
}

impl KSelector {
    /// Indices from 1, or an error when `k` exceeds the dimension.
    pub fn indices(self, n: usize) -> Result<Vec<usize>, String> {
        match self {
            KSelector::All => Ok((1..=n).collect()),
            KSelector::Index(k) if k <= n => Ok(vec![k]),
            KSelector::Index(k) => Err(format!("k = {k} exceeds the matrix dimension {n}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        match parts.as_slice() {
            [re] => Ok(ComplexArg(Complex64::new(parse_real(re)?, 0.0))),
            [re, im] => Ok(ComplexArg(Complex64::new(parse_real(re)?, parse_real(im)?))),
            _ => Err(format!("expected `re,im`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorArg {
    Unit(usize),
    Entries(Vec<Complex64>),
}

impl FromStr for VectorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(k) = s.strip_prefix('e') {
            return match k.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(VectorArg::Unit(k)),
                _ => Err(format!("expected e<k> with k >= 1, got {s:?}")),
            };
        }
        let entries = s
            .split(';')
            .map(|e| e.parse::<ComplexArg>().map(|c| c.0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VectorArg::Entries(entries))
    }
}

impl VectorArg {
    pub fn resolve(&self, n: usize) -> Result<Vec<Complex64>, String> {
        match self {
            VectorArg::Unit(k) if *k <= n => {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                v[k - 1] = Complex64::new(1.0, 0.0);
                Ok(v)
            }
            VectorArg::Unit(k) => Err(format!("e{k} does not exist in dimension {n}")),
            VectorArg::Entries(v) if v.len() == n => Ok(v.clone()),
            VectorArg::Entries(v) => Err(format!("vector has {} entries, dimension is {n}", v.len())),
        }
    }
}
