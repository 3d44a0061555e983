//! Structured check records and verdicts shared by every verifier.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

/// How a check reached its status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Exact identity of polynomials.
    Exact,
    /// Valid over the algebraic closure.
    Certificate,
    /// F_p-points only.
    Sampling,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub evidence: Evidence,
    pub prime: u64,
    pub summary: String,
    pub witnesses: Value,
}

impl CheckRecord {
    pub fn new(name: &str, prime: u64, evidence: Evidence) -> Self {
        CheckRecord {
            name: name.into(),
            status: Status::Pass,
            evidence,
            prime,
            summary: String::new(),
            witnesses: Value::Null,
        }
    }

    pub fn status(mut self, ok: bool) -> Self {
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    pub fn with_status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn summary(mut self, s: impl Into<String>) -> Self {
        self.summary = s.into();
        self
    }

    pub fn witnesses(mut self, v: impl Serialize) -> Self {
        self.witnesses = serde_json::to_value(v).unwrap_or(Value::Null);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
    pub verdict: Status,
}

impl VerificationReport {
    /// Verdict is pass iff every check that ran passed.
    pub fn new(checks: Vec<CheckRecord>) -> Self {
        let verdict = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        VerificationReport { checks, verdict }
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let st = serde_json::to_value(c.status).unwrap();
            let ev = serde_json::to_value(c.evidence).unwrap();
            s.push_str(&format!(
                "[{:<12}] {:<40} ({}, p = {}) {}\n",
                st.as_str().unwrap(),
                c.name,
                ev.as_str().unwrap(),
                c.prime,
                c.summary
            ));
        }
        let v = serde_json::to_value(self.verdict).unwrap();
        s.push_str(&format!("verdict: {}\n", v.as_str().unwrap()));
        s
    }
}
