//! Machine-readable run reports.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Violation,
    Infeasible,
}

impl Outcome {
    /// 0 pass, 1 violation, 2 anything the run could not decide.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 1,
            Outcome::Infeasible => 2,
        }
    }
}

/// A single failed check, with everything needed to re-run it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub law: String,
    /// the input the check was evaluated on
    pub input: Value,
    /// what went wrong (differing tuples, sizes, ...)
    pub detail: Value,
}

/// Result of one suite run.
///
/// `params` holds only the parameters that determine the result; scheduling
/// flags such as `--parallel` are left out so serial and parallel runs
/// produce the same bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub suite: String,
    pub params: Value,
    pub digest: String,
    pub outcome: Outcome,
    pub counters: BTreeMap<String, u64>,
    pub witnesses: Vec<Witness>,
    /// certificates and other outputs that are not violations
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub artifacts: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Lowercase hex SHA-256 of the compact JSON form of `v`.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("JSON values always serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunReport {
    pub fn new(suite: &str, params: Value) -> Self {
        let command = format!("verify {suite} {}", flags_of(&params));
        RunReport {
            command: command.trim_end().to_string(),
            suite: suite.to_string(),
            digest: digest(&params),
            params,
            outcome: Outcome::Pass,
            counters: BTreeMap::new(),
            witnesses: Vec::new(),
            artifacts: BTreeMap::new(),
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_default() += by;
    }

    pub fn set(&mut self, key: &str, v: u64) {
        self.counters.insert(key.to_string(), v);
    }

    pub fn max(&mut self, key: &str, v: u64) {
        let e = self.counters.entry(key.to_string()).or_default();
        *e = (*e).max(v);
    }

    pub fn violate(&mut self, w: Witness) {
        self.outcome = Outcome::Violation;
        self.witnesses.push(w);
    }

    /// Marks the run undecided unless a violation was already found.
    pub fn infeasible(&mut self, note: impl Into<String>) {
        if self.outcome == Outcome::Pass {
            self.outcome = Outcome::Infeasible;
        }
        self.notes.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn timed(mut self, d: Duration) -> Self {
        self.wall_time_ms = Some(d.as_millis() as u64);
        self
    }

    /// Pretty JSON without the wall time; equal runs give equal bytes.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.wall_time_ms = None;
        serde_json::to_string_pretty(&c).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn flags_of(params: &Value) -> String {
    let Some(obj) = params.as_object() else { return String::new() };
    let mut out = String::new();
    for (k, v) in obj {
        let k = k.replace('_', "-");
        match v {
            Value::Null => {}
            Value::Array(items) => {
                for it in items {
                    out.push_str(&format!("--{k} {} ", scalar(it)));
                }
            }
            Value::Bool(true) => out.push_str(&format!("--{k} ")),
            Value::Bool(false) => {}
            other => out.push_str(&format!("--{k} {} ", scalar(other))),
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
