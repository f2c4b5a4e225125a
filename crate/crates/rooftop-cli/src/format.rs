//! Field and report files.
//!
//! Fields travel as JSON documents
//! `{"dim": 1|2, "axes": [{"min", "max", "n"}, ...], "values": [...]}`
//! with values row-major, first axis slowest. Readers reject length
//! mismatches and non-finite entries (construction re-validates), and
//! every error message names the offending file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use rooftop_core::report::CheckReport;
use rooftop_core::{Axis, ScalarField};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisJson {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldJson {
    pub dim: usize,
    pub axes: Vec<AxisJson>,
    pub values: Vec<f64>,
}

impl FieldJson {
    pub fn from_field(f: &ScalarField) -> FieldJson {
        FieldJson {
            dim: f.dim(),
            axes: f
                .axes()
                .iter()
                .map(|a| AxisJson { min: a.min(), max: a.max(), n: a.len() })
                .collect(),
            values: f.values().to_vec(),
        }
    }

    pub fn into_field(self) -> Result<ScalarField, String> {
        if self.dim != self.axes.len() {
            return Err(format!(
                "dim is {} but {} axes are given",
                self.dim,
                self.axes.len()
            ));
        }
        let axes = self
            .axes
            .iter()
            .map(|a| Axis::new(a.min, a.max, a.n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        ScalarField::new(axes, self.values).map_err(|e| e.to_string())
    }
}

pub fn parse_field_bytes(bytes: &[u8], path: &Path) -> Result<ScalarField, String> {
    let parsed: FieldJson = serde_json::from_slice(bytes)
        .map_err(|e| format!("invalid field file {}: {e}", path.display()))?;
    parsed
        .into_field()
        .map_err(|e| format!("invalid field file {}: {e}", path.display()))
}

pub fn read_field(path: &Path) -> Result<ScalarField, String> {
    let bytes = fs::read(path)
        .map_err(|e| format!("cannot read field file {}: {e}", path.display()))?;
    parse_field_bytes(&bytes, path)
}

pub fn write_field(path: &Path, f: &ScalarField) -> Result<(), String> {
    let doc = serde_json::to_string(&FieldJson::from_field(f))
        .expect("field serialization cannot fail");
    fs::write(path, doc.as_bytes())
        .map_err(|e| format!("cannot write field file {}: {e}", path.display()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// A named input together with the digest of its bytes (file contents
/// or expression source).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputDigest {
    pub label: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricJson {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    pub pass: bool,
    pub worst_violation: f64,
    pub location: Vec<usize>,
    pub metrics: Vec<MetricJson>,
}

impl CheckJson {
    pub fn from_report(r: &CheckReport) -> CheckJson {
        CheckJson {
            name: r.check.to_string(),
            status: r.status.to_string(),
            pass: r.pass,
            worst_violation: r.worst_violation,
            location: r.location.clone(),
            metrics: r
                .metrics
                .iter()
                .map(|(name, value)| MetricJson { name: name.clone(), value: *value })
                .collect(),
        }
    }
}

/// The per-invocation report: what ran, on which inputs, and how every
/// check came out. Identical inputs yield identical reports except for
/// `wall_time_ms`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<CheckJson>,
    pub pass: bool,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<InputDigest>) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs,
            checks: Vec::new(),
            pass: true,
            wall_time_ms: 0,
        }
    }

    pub fn push(&mut self, check: CheckJson) {
        self.pass = self.pass && check.pass;
        self.checks.push(check);
    }

    pub fn push_report(&mut self, r: &CheckReport) {
        self.push(CheckJson::from_report(r));
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        let doc = serde_json::to_string_pretty(self)
            .expect("report serialization cannot fail");
        fs::write(path, doc.as_bytes())
            .map_err(|e| format!("cannot write report file {}: {e}", path.display()))
    }
}
