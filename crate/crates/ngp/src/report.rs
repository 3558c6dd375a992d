use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CheckResult {
    pub check: String,
    pub pair: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    /// First failing entry, when there is one.
    pub witness: Option<Value>,
    pub runtime_ms: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The report with its runtime zeroed, for determinism comparisons.
    pub fn without_runtime(&self) -> CheckResult {
        CheckResult { runtime_ms: 0, ..self.clone() }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub status: Status,
    pub checks: Vec<CheckResult>,
}

impl Report {
    /// Sorts by (check, pair) and derives the overall status.
    pub fn new(suite: impl Into<String>, mut checks: Vec<CheckResult>) -> Report {
        checks.sort_by(|a, b| (&a.check, &a.pair).cmp(&(&b.check, &b.pair)));
        let status = if checks.iter().all(CheckResult::passed) { Status::Pass } else { Status::Fail };
        Report { suite: suite.into(), status, checks }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Outcome of a check body before timing and labelling.
pub struct Outcome {
    pub ok: bool,
    pub expected: Value,
    pub actual: Value,
    pub witness: Option<Value>,
}

impl Outcome {
    pub fn pass(expected: Value, actual: Value) -> Outcome {
        Outcome { ok: true, expected, actual, witness: None }
    }

    pub fn compare(expected: Value, actual: Value) -> Outcome {
        Outcome { ok: expected == actual, expected, actual, witness: None }
    }

    pub fn fail(expected: Value, actual: Value, witness: Value) -> Outcome {
        Outcome { ok: false, expected, actual, witness: Some(witness) }
    }

    pub fn with_witness(mut self, w: Option<Value>) -> Outcome {
        if !self.ok {
            self.witness = w.or(self.witness);
        }
        self
    }
}

/// Runs `body`, timing it; an error becomes a failing result carrying the message.
pub fn run_check<F>(check: &str, pair: &str, parameters: BTreeMap<String, Value>, body: F) -> CheckResult
where
    F: FnOnce() -> Result<Outcome, crate::error::CliError>,
{
    let start = Instant::now();
    let out = body();
    let runtime_ms = start.elapsed().as_millis() as u64;
    let (status, expected, actual, witness) = match out {
        Ok(o) => (if o.ok { Status::Pass } else { Status::Fail }, o.expected, o.actual, o.witness),
        Err(e) => (Status::Fail, Value::Null, Value::Null, Some(Value::String(e.to_string()))),
    };
    CheckResult { check: check.to_string(), pair: pair.to_string(), parameters, status, expected, actual, witness, runtime_ms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overall_status_and_order() {
        let a = run_check("b.check", "L6:n=2", BTreeMap::new(), || Ok(Outcome::compare(json!(1), json!(1))));
        let b = run_check("a.check", "L6:n=2", BTreeMap::new(), || Ok(Outcome::compare(json!(1), json!(2))));
        let r = Report::new("t", vec![a.clone()]);
        assert!(r.passed());
        let r = Report::new("t", vec![a, b]);
        assert!(!r.passed());
        assert_eq!(r.checks[0].check, "a.check");
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn errors_become_failures() {
        let c = run_check("x", "L8:n=2", BTreeMap::new(), || Err(crate::error::CliError::Io("gone".into())));
        assert!(!c.passed());
        assert_eq!(c.witness, Some(json!("io: gone")));
    }
}
