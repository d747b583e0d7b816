use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// A documented failure that the suite is meant to surface.
    ExpectedFail,
    Skipped,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::ExpectedFail => "expected-fail",
            Outcome::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    /// Identifier of the invariant being checked.
    pub id: String,
    /// Where the check was evaluated (fixture, prime, spot).
    pub location: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    pub fn new(
        id: &str,
        location: impl Into<String>,
        outcome: Outcome,
        detail: impl Into<String>,
    ) -> Check {
        Check {
            id: id.to_string(),
            location: location.into(),
            outcome,
            detail: detail.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), Value::from(self.id.clone()));
        obj.insert("location".into(), Value::from(self.location.clone()));
        obj.insert("outcome".into(), Value::from(self.outcome.label()));
        obj.insert("detail".into(), Value::from(self.detail.clone()));
        Value::Object(obj)
    }

    pub fn line(&self) -> String {
        let mut s = format!("[{}] {} @ {}", self.outcome.label(), self.id, self.location);
        if !self.detail.is_empty() {
            s.push_str(": ");
            s.push_str(&self.detail);
        }
        s
    }
}

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub results: Value,
    pub checks: Vec<Check>,
    /// Human-readable lines printed before the checks.
    pub lines: Vec<String>,
}

impl CommandOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }
}

pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub output: CommandOutput,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: &Value, output: CommandOutput) -> RunReport {
        let digest = Sha256::digest(eqk_core::json::canonical(inputs).as_bytes());
        RunReport {
            command,
            inputs_digest: hex::encode(digest),
            output,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert(
            "command".into(),
            Value::Array(self.command.iter().cloned().map(Value::from).collect()),
        );
        obj.insert(
            "inputs_sha256".into(),
            Value::from(self.inputs_digest.clone()),
        );
        obj.insert("results".into(), self.output.results.clone());
        obj.insert(
            "checks".into(),
            Value::Array(self.output.checks.iter().map(Check::to_json).collect()),
        );
        obj.insert("passed".into(), Value::Bool(self.output.passed()));
        Value::Object(obj)
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for l in &self.output.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.output.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        if !self.output.checks.is_empty() {
            let count = |o| self.output.checks.iter().filter(|c| c.outcome == o).count();
            out.push_str(&format!(
                "{} passed, {} failed, {} expected failures, {} skipped\n",
                count(Outcome::Pass),
                count(Outcome::Fail),
                count(Outcome::ExpectedFail),
                count(Outcome::Skipped)
            ));
        }
        out
    }
}
