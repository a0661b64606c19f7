//! Versioned report envelope, exit codes and schema validation.

use std::collections::BTreeMap;

use lp_certify::criteria::Outcome;
use lp_certify::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::Format;

pub const SCHEMA: &str = "lp-certify/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESES_NOT_MET: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    HypothesesNotMet,
    Unresolved,
    /// A computed value rather than a verdict.
    Ok,
    Error,
}

impl Status {
    pub const ALL: [Status; 6] = [Status::Pass, Status::Fail, Status::HypothesesNotMet, Status::Unresolved, Status::Ok, Status::Error];

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::HypothesesNotMet => "HYPOTHESES_NOT_MET",
            Status::Unresolved => "UNRESOLVED",
            Status::Ok => "OK",
            Status::Error => "ERROR",
        }
    }
}

impl From<Outcome> for Status {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Pass => Status::Pass,
            Outcome::Fail => Status::Fail,
            Outcome::HypothesesNotMet => Status::HypothesesNotMet,
        }
    }
}

/// Settings that determine a run's output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Working precision in significant decimal digits.
    pub precision_digits: u32,
    /// Tolerances in effect, by name.
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    /// Output depends only on the arguments; there is no randomness or clock input.
    pub deterministic: bool,
}

/// Rows for CSV output and plot data.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(kind: &'static str, columns: &[&'static str]) -> Self {
        Self { kind, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Full precision in scientific notation; shortest round-trip digits.
pub fn sci(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub result: Value,
    /// CSV rendering of the result.
    pub table: Option<Table>,
    /// Plot data: census, interleaving or section-constant tables only.
    pub plot: Option<Table>,
}

impl Report {
    pub fn new(command: impl Into<String>, status: Status, result: Value) -> Self {
        Self { command: command.into(), status, result, table: None, plot: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass | Status::Fail | Status::Ok => EXIT_OK,
            Status::HypothesesNotMet => EXIT_HYPOTHESES_NOT_MET,
            Status::Unresolved => EXIT_UNRESOLVED,
            Status::Error => self.result.get("code").and_then(Value::as_i64).map_or(EXIT_SOFTWARE, |c| c as i32),
        }
    }

    pub fn envelope(&self, config: &RunConfig) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "status": self.status,
            "config": config,
            "result": self.result,
        })
    }
}

/// A failure before or during a computation, with its exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub field: Option<String>,
    pub message: String,
}

impl Failure {
    pub fn usage(field: Option<String>, message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, kind: "usage", field, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, kind: "io", field: None, message: message.into() }
    }

    pub fn into_report(self, command: &str) -> Report {
        let status = if self.code == EXIT_UNRESOLVED { Status::Unresolved } else { Status::Error };
        let mut result = json!({ "code": self.code, "kind": self.kind, "message": self.message });
        if let Some(f) = self.field {
            result["field"] = Value::String(f);
        }
        Report::new(command, status, json!({ "error": result, "code": self.code }))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Domain { field, .. } => Failure { code: EXIT_USAGE, kind: "usage", field: Some(field), message },
            Error::Range(_) | Error::Degree { .. } => Failure { code: EXIT_USAGE, kind: "usage", field: None, message },
            Error::Unresolved { .. } | Error::Convergence { .. } | Error::Solver { .. } | Error::ContourTooClose { .. } => {
                Failure { code: EXIT_UNRESOLVED, kind: "unresolved", field: None, message }
            }
            Error::Bracket { .. } | Error::Inconsistent(_) => Failure { code: EXIT_SOFTWARE, kind: "internal", field: None, message },
        }
    }
}

/// Checks a parsed report against the `lp-certify/1` schema.
pub fn validate(report: &Value) -> Result<(), String> {
    let obj = report.as_object().ok_or("report is not a JSON object")?;
    for key in ["schema", "command", "status", "config", "result"] {
        if !obj.contains_key(key) {
            return Err(format!("missing key '{key}'"));
        }
    }
    if obj.len() != 5 {
        return Err("unexpected top-level keys".into());
    }
    if obj["schema"] != SCHEMA {
        return Err(format!("schema must be '{SCHEMA}'"));
    }
    let command = obj["command"].as_str().ok_or("command must be a string")?;
    let status: Status = serde_json::from_value(obj["status"].clone()).map_err(|e| format!("status: {e}"))?;
    let config: RunConfig = serde_json::from_value(obj["config"].clone()).map_err(|e| format!("config: {e}"))?;
    if !config.deterministic {
        return Err("config.deterministic must be true".into());
    }
    let result = obj["result"].as_object().ok_or("result must be an object")?;
    if matches!(status, Status::Error) || result.contains_key("error") {
        let err = result.get("error").and_then(Value::as_object).ok_or("error report without 'error'")?;
        for key in ["code", "kind", "message"] {
            if !err.contains_key(key) {
                return Err(format!("error.{key} missing"));
            }
        }
        return Ok(());
    }
    let need: &[&str] = match command.split_whitespace().next().unwrap_or("") {
        "test" => &["criterion", "outcome", "witness", "hypotheses", "measurements"],
        "zeros" => &["degree", "roots", "count_real", "count_nonreal", "disk_counts"],
        "constants" => match command {
            "constants q-inf" => &["value", "±", "lo", "hi", "evaluations"],
            "constants c-n" => &["q_infinity", "constants"],
            "constants interleaving" => &["q_infinity", "constants", "relations", "all_hold"],
            "constants roots" => &["polynomials"],
            _ => return Err(format!("unknown command '{command}'")),
        },
        "verify-inequalities" => &["reports", "all_hold"],
        "census" => &["outcome", "hypotheses", "rows", "stabilized"],
        _ => return Err(format!("unknown command '{command}'")),
    };
    match need.iter().find(|k| !result.contains_key(**k)) {
        Some(k) => Err(format!("result.{k} missing for '{command}'")),
        None => Ok(()),
    }
}
