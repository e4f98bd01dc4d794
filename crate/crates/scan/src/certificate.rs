//! Certificates: the config, named headline numbers, pass/fail checks and
//! witnesses of one scan.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ScanConfig, SCHEMA_VERSION};
use crate::{ExitCode, ScanError};

/// Identifiers of the two curvature engines and the search lattices.
pub const ENGINES: [&str; 4] = [
    "algebraic: Koszul formula for left-invariant metrics, O'Neill for submersions",
    "finite-difference: Riemann tensor from chart metric components, central differences at h = 1e-3, 5e-4, 2.5e-4 with Richardson extrapolation",
    "grassmann: Kronecker lattice on Gr_2(R^5), Fibonacci hemisphere on complements, Nelder-Mead refinement",
    "wu-infeasibility: outward-rounded interval arithmetic / Lipschitz grid with bisection",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// A computed number missed its bound.
    Numeric,
    /// The grid was too coarse to decide.
    Resolution,
    /// Reported but never fails the run.
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub engines: Vec<String>,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "biorth".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            engines: ENGINES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub command: String,
    pub tool: ToolInfo,
    pub config: ScanConfig,
    pub passed: bool,
    pub exit_code: i32,
    pub headline: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub witnesses: BTreeMap<String, Value>,
    /// Only written on request, so that certificates stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl Certificate {
    pub fn new(command: &str, config: &ScanConfig) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            tool: ToolInfo::current(),
            config: config.clone(),
            passed: true,
            exit_code: 0,
            headline: BTreeMap::new(),
            checks: Vec::new(),
            witnesses: BTreeMap::new(),
            wall_clock_seconds: None,
        }
    }

    pub fn headline(&mut self, name: &str, value: f64) {
        self.headline.insert(name.into(), value);
    }

    pub fn witness<T: Serialize>(&mut self, name: &str, value: &T) {
        let v = serde_json::to_value(value).expect("witness serializes");
        self.witnesses.insert(name.into(), v);
    }

    pub fn check(&mut self, name: &str, kind: CheckKind, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            kind,
            passed,
            detail: detail.into(),
        });
        self.settle();
    }

    fn settle(&mut self) {
        let failing = |k: CheckKind| self.checks.iter().any(|c| c.kind == k && !c.passed);
        let code = if failing(CheckKind::Resolution) {
            ExitCode::Resolution
        } else if failing(CheckKind::Numeric) {
            ExitCode::Numeric
        } else {
            ExitCode::Pass
        };
        self.exit_code = code as i32;
        self.passed = code == ExitCode::Pass;
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.kind != CheckKind::Warning && !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ScanError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ScanError::Config(e.to_string()))?;
        let got = v.get("schema_version").and_then(Value::as_u64).unwrap_or(0) as u32;
        if got != SCHEMA_VERSION {
            return Err(ScanError::Schema {
                expected: SCHEMA_VERSION,
                got,
            });
        }
        serde_json::from_value(v).map_err(|e| ScanError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ScanError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScanError::Io(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), ScanError> {
        std::fs::write(path, self.to_json()).map_err(|e| ScanError::Io(path.display().to_string(), e.to_string()))
    }

    /// Headline numbers as `name,value` lines.
    pub fn headline_csv(&self) -> String {
        let mut out = String::from("name,value\n");
        for (k, v) in &self.headline {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}
