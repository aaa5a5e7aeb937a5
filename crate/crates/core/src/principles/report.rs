use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex {
    fn from(c: Complex64) -> Self {
        Complex { re: c.re, im: c.im }
    }
}

/// Loosely typed payload for witnesses and parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Complex(Complex),
    Vector(Vec<Complex>),
    Matrix(Vec<Vec<Complex>>),
    List(Vec<Value>),
    Text(String),
    Object(BTreeMap<String, Value>),
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n as i64)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<Complex64> for Value {
    fn from(c: Complex64) -> Self {
        Value::Complex(c.into())
    }
}

impl From<&[Complex64]> for Value {
    fn from(v: &[Complex64]) -> Self {
        Value::Vector(v.iter().map(|&c| c.into()).collect())
    }
}

impl From<&CMatrix> for Value {
    fn from(m: &CMatrix) -> Self {
        Value::Matrix(
            (0..m.dim())
                .map(|i| m.row(i).iter().map(|&c| c.into()).collect())
                .collect(),
        )
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Self {
        Value::List(v.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Residual {
    pub fn within(&self) -> bool {
        self.tolerance.is_none_or(|t| self.value <= t)
    }
}

/// Outcome of one check. `certified` is only issued when every residual with
/// a tolerance is within it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, Residual>,
    pub witnesses: BTreeMap<String, Value>,
    pub parameters: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            verdict: Verdict::Inconclusive,
            residuals: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            parameters: BTreeMap::new(),
            reason: None,
        }
    }

    pub fn residual(&mut self, name: &str, value: f64, tolerance: Option<f64>) -> &mut Self {
        self.residuals.insert(name.to_string(), Residual { value, tolerance });
        self
    }

    pub fn witness(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.witnesses.insert(name.to_string(), value.into());
        self
    }

    pub fn param(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(name.to_string(), value.into());
        self
    }

    pub fn reason(&mut self, text: impl Into<String>) -> &mut Self {
        self.reason = Some(text.into());
        self
    }

    pub fn all_within(&self) -> bool {
        self.residuals.values().all(Residual::within)
    }

    /// Certified when every residual passes, refuted otherwise.
    pub fn settle(&mut self) -> &mut Self {
        self.verdict = if self.all_within() {
            Verdict::Certified
        } else {
            Verdict::Refuted
        };
        self
    }

    pub fn set_verdict(&mut self, verdict: Verdict) -> &mut Self {
        debug_assert!(verdict != Verdict::Certified || self.all_within());
        self.verdict = verdict;
        self
    }

    pub fn residual_value(&self, name: &str) -> Option<f64> {
        self.residuals.get(name).map(|r| r.value)
    }
}
