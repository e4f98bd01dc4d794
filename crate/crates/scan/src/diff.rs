//! Field-by-field comparison of two certificates.

use serde::Serialize;
use serde_json::Value;

use crate::{ExitCode, ScanError, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriftClass {
    /// The two runs were configured differently.
    Config,
    /// A headline number, check or status changed.
    Value,
    /// An argmin or other supporting detail changed.
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffTolerances {
    /// Relative tolerance of headline numbers.
    pub headline: f64,
    /// Absolute-or-relative tolerance of witness numbers.
    pub witness: f64,
}

impl Default for DiffTolerances {
    fn default() -> Self {
        DiffTolerances {
            headline: 1e-9,
            witness: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Drift {
    pub path: String,
    pub class: DriftClass,
    pub a: Value,
    pub b: Value,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DiffReport {
    pub drifts: Vec<Drift>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.drifts.is_empty()
    }

    pub fn config_drift(&self) -> impl Iterator<Item = &Drift> {
        self.drifts.iter().filter(|d| d.class == DriftClass::Config)
    }

    /// Drifts of computed results beyond their class tolerance.
    pub fn regressions(&self) -> impl Iterator<Item = &Drift> {
        self.drifts.iter().filter(|d| d.class != DriftClass::Config && !d.within_tolerance)
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.regressions().next().is_some() {
            ExitCode::Numeric
        } else {
            ExitCode::Pass
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.drifts {
            let class = match d.class {
                DriftClass::Config => "config-drift",
                DriftClass::Value => "value-drift",
                DriftClass::Witness => "witness-drift",
            };
            let note = if d.within_tolerance { " (within tolerance)" } else { "" };
            out.push_str(&format!("{class} {}: {} -> {}{note}\n", d.path, d.a, d.b));
        }
        out
    }
}

fn class_of(path: &str) -> Option<DriftClass> {
    let top = path.split(['.', '[']).next().unwrap_or("");
    match top {
        "wall_clock_seconds" => None,
        "config" => Some(DriftClass::Config),
        "witnesses" => Some(DriftClass::Witness),
        _ => Some(DriftClass::Value),
    }
}

fn close(a: f64, b: f64, class: DriftClass, tol: &DiffTolerances) -> bool {
    let scale = a.abs().max(b.abs());
    match class {
        DriftClass::Config => false,
        DriftClass::Value => (a - b).abs() <= tol.headline * scale,
        DriftClass::Witness => (a - b).abs() <= tol.witness * scale.max(1.0),
    }
}

fn walk(path: &str, a: &Value, b: &Value, tol: &DiffTolerances, out: &mut Vec<Drift>) {
    let Some(class) = class_of(path) else {
        return;
    };
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let p = join(k);
                if class_of(&p).is_none() {
                    continue;
                }
                walk(&p, x.get(k).unwrap_or(&Value::Null), y.get(k).unwrap_or(&Value::Null), tol, out);
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                walk(&format!("{path}[{i}]"), u, v, tol, out);
            }
        }
        _ if a == b => {}
        _ => {
            let within = match (a.as_f64(), b.as_f64()) {
                (Some(u), Some(v)) => close(u, v, class, tol),
                _ => false,
            };
            out.push(Drift {
                path: path.to_string(),
                class,
                a: a.clone(),
                b: b.clone(),
                within_tolerance: within,
            });
        }
    }
}

fn schema(v: &Value) -> u32 {
    v.get("schema_version").and_then(Value::as_u64).unwrap_or(0) as u32
}

/// Compares two certificate documents. Config differences are reported
/// but are not regressions.
pub fn cmd_diff(a: &str, b: &str, tol: &DiffTolerances) -> Result<DiffReport, ScanError> {
    let parse = |s: &str| serde_json::from_str::<Value>(s).map_err(|e| ScanError::Config(e.to_string()));
    let (a, b) = (parse(a)?, parse(b)?);
    for v in [&a, &b] {
        if schema(v) != SCHEMA_VERSION {
            return Err(ScanError::Schema {
                expected: SCHEMA_VERSION,
                got: schema(v),
            });
        }
    }
    let mut drifts = Vec::new();
    walk("", &a, &b, tol, &mut drifts);
    Ok(DiffReport { drifts })
}
