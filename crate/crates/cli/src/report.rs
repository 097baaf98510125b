use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One certified check. `anchor` names the mathematical statement the check
/// witnesses; `operation` names the library call that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub operation: String,
    pub anchor: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub characteristic: u64,
    /// Present whenever a seeded generator was consulted.
    pub seed: Option<u64>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: BTreeMap<String, Value>,
    pub residuals: Vec<Residual>,
    /// Only recorded with `--timing`, so default reports are reproducible byte for byte.
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: &BTreeMap<String, Value>, characteristic: u64) -> Self {
        let canonical = serde_json::to_string(&(command, inputs)).expect("inputs serialize");
        RunReport {
            command: command.to_string(),
            input_digest: hex::encode(Sha256::digest(canonical.as_bytes())),
            characteristic,
            seed: None,
            verdicts: Vec::new(),
            witnesses: BTreeMap::new(),
            residuals: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn verdict(
        &mut self,
        check: &str,
        operation: &str,
        anchor: &str,
        passed: bool,
        detail: impl Serialize,
    ) {
        self.verdicts.push(Verdict {
            check: check.into(),
            operation: operation.into(),
            anchor: anchor.into(),
            passed,
            detail: serde_json::to_value(detail).expect("detail serializes"),
        });
    }

    pub fn witness(&mut self, name: &str, value: impl Serialize) {
        self.witnesses.insert(
            name.into(),
            serde_json::to_value(value).expect("witness serializes"),
        );
    }

    pub fn residual(&mut self, name: &str, value: f64, tolerance: f64) {
        self.residuals.push(Residual {
            name: name.into(),
            value,
            tolerance,
        });
    }

    /// Every verdict passed and every residual is within tolerance.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
            && self.residuals.iter().all(|r| r.value <= r.tolerance)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
