//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// One check: what ran, against which claim, with what result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub anchor: String,
    pub instance: String,
    pub outcome: Outcome,
    pub evidence: Value,
    /// Wall-clock time; omitted when reports must be byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl VerificationReport {
    pub fn new(check: &str, anchor: &str, instance: &str, passed: bool, evidence: impl Serialize) -> Self {
        Self {
            check: check.into(),
            anchor: anchor.into(),
            instance: instance.into(),
            outcome: Outcome::from_bool(passed),
            evidence: serde_json::to_value(evidence).unwrap_or_else(|e| Value::String(e.to_string())),
            millis: None,
        }
    }

    /// A failed check whose evidence is an error message.
    pub fn error(check: &str, anchor: &str, instance: &str, err: impl std::fmt::Display) -> Self {
        Self::new(check, anchor, instance, false, serde_json::json!({ "error": err.to_string() }))
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn timed(mut self, millis: u64) -> Self {
        self.millis = Some(millis);
        self
    }
}

/// Reports plus pass/fail counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub checks: Vec<VerificationReport>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl ReportBundle {
    pub fn new(checks: Vec<VerificationReport>) -> Self {
        let passed = checks.iter().filter(|c| c.passed()).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        Self { checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = VerificationReport::new("k", "a", "i", true, serde_json::json!({"n": 1}));
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"check":"k","anchor":"a","instance":"i","outcome":"pass","evidence":{"n":1}}"#);
        let b = ReportBundle::new(vec![r.clone(), VerificationReport::error("k", "a", "i", "boom")]);
        assert_eq!(b.summary, Summary { total: 2, passed: 1, failed: 1 });
        assert!(!b.all_passed());
        assert!(serde_json::to_string(&r.timed(3)).unwrap().contains("\"millis\":3"));
    }
}
