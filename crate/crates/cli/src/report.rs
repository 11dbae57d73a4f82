//! Reports and their canonical serialization.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes iff `max_residual ≤ tolerance`; NaN never passes.
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }

    fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("max_residual".into(), float(self.max_residual));
        m.insert("tolerance".into(), float(self.tolerance));
        m.insert("pass".into(), Value::Bool(self.pass));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorRecord {
    pub stage: String,
    pub message: String,
}

/// One row of the `flow` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowRow {
    pub t: f64,
    pub max_split_residual: f64,
    pub max_yp_residual: f64,
    pub jump_count: usize,
}

pub const FLOW_CSV_HEADER: &str = "t,max_split_residual,max_yp_residual,jump_count";
pub const CHECK_CSV_HEADER: &str = "name,max_residual,tolerance,pass";

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub jumping_points: Vec<[f64; 4]>,
    pub errors: Vec<ErrorRecord>,
    pub flow_table: Vec<FlowRow>,
    /// Command-specific results.
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            jumping_points: Vec::new(),
            errors: Vec::new(),
            flow_table: Vec::new(),
            data: Value::Object(Map::new()),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, max_residual: f64, tolerance: f64) -> bool {
        let rec = CheckRecord::new(name, max_residual, tolerance);
        let pass = rec.pass;
        self.checks.push(rec);
        pass
    }

    pub fn error(&mut self, stage: &str, err: impl std::fmt::Display) {
        self.errors.push(ErrorRecord {
            stage: stage.to_string(),
            message: err.to_string(),
        });
    }

    pub fn set(&mut self, key: &str, value: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), value);
        }
    }

    /// True when every check passed and no error was recorded.
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("version".into(), Value::String(self.version.clone()));
        m.insert("config".into(), self.config.clone());
        m.insert("checks".into(), Value::Array(self.checks.iter().map(CheckRecord::to_value).collect()));
        m.insert(
            "jumping_points".into(),
            Value::Array(self.jumping_points.iter().map(|p| floats(p)).collect()),
        );
        m.insert(
            "errors".into(),
            Value::Array(
                self.errors
                    .iter()
                    .map(|e| serde_json::to_value(e).expect("strings serialize"))
                    .collect(),
            ),
        );
        m.insert(
            "flow_table".into(),
            Value::Array(
                self.flow_table
                    .iter()
                    .map(|r| {
                        let mut row = Map::new();
                        row.insert("t".into(), float(r.t));
                        row.insert("max_split_residual".into(), float(r.max_split_residual));
                        row.insert("max_yp_residual".into(), float(r.max_yp_residual));
                        row.insert("jump_count".into(), Value::from(r.jump_count));
                        Value::Object(row)
                    })
                    .collect(),
            ),
        );
        m.insert("data".into(), self.data.clone());
        m.insert("pass".into(), Value::Bool(self.pass()));
        Value::Object(m)
    }
}

/// A JSON number, or a string for non-finite values.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map(Value::Number).expect("finite")
    } else if x.is_nan() {
        Value::String("NaN".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| float(*x)).collect())
}

fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_canonical(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().expect("f64")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_canonical(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push_str(": ");
                write_canonical(&map[key.as_str()], indent + 1, out);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Canonical JSON: sorted keys, 17 significant digits, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, 0, &mut out);
    out.push('\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Serialize a report. CSV gives the flow table when present, the checks otherwise.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => canonical_json(&report.to_value()),
        Format::Csv => {
            let mut out = String::new();
            if report.command == "flow" {
                out.push_str(FLOW_CSV_HEADER);
                out.push('\n');
                for r in &report.flow_table {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        format_float(r.t),
                        format_float(r.max_split_residual),
                        format_float(r.max_yp_residual),
                        r.jump_count
                    );
                }
            } else {
                out.push_str(CHECK_CSV_HEADER);
                out.push('\n');
                for c in &report.checks {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        c.name.replace(',', ";"),
                        format_float(c.max_residual),
                        format_float(c.tolerance),
                        c.pass
                    );
                }
            }
            out
        }
    }
}
