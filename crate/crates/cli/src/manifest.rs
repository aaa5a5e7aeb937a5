use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};
use svfield::principles::{Residual, Verdict, VerificationReport};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    /// `None` when the output went to stdout.
    pub path: Option<String>,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, Residual>,
}

impl From<&VerificationReport> for CheckRecord {
    fn from(r: &VerificationReport) -> Self {
        CheckRecord {
            check: r.check.clone(),
            verdict: r.verdict,
            residuals: r.residuals.clone(),
        }
    }
}

/// Everything needed to repeat a run and confirm its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    pub scenario: String,
    pub scenario_sha256: String,
    pub seed: Option<u64>,
    pub output: OutputRecord,
    pub checks: Vec<CheckRecord>,
}

impl RunManifest {
    pub fn new(command: &str, scenario: &str, scenario_bytes: &[u8]) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            scenario: scenario.to_string(),
            scenario_sha256: sha256_hex(scenario_bytes),
            seed: None,
            output: OutputRecord {
                path: None,
                sha256: String::new(),
                bytes: 0,
            },
            checks: Vec::new(),
        }
    }

    pub fn record_output(&mut self, path: Option<&std::path::Path>, contents: &[u8]) {
        self.output = OutputRecord {
            path: path.map(|p| p.display().to_string()),
            sha256: sha256_hex(contents),
            bytes: contents.len(),
        };
    }
}
