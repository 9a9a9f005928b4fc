//! Canonical JSON reports.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        Check { check: check.into(), status, checked: None, witness: None }
    }

    pub fn pass(check: impl Into<String>) -> Self {
        Check::new(check, Status::Pass)
    }

    pub fn with_witness(mut self, w: impl Serialize) -> Self {
        self.witness = Some(serde_json::to_value(w).expect("witness serializes"));
        self
    }

    pub fn with_checked(mut self, n: usize) -> Self {
        self.checked = Some(n);
        self
    }
}

/// What a subcommand hands back before the shared fields are attached.
#[derive(Debug, Default)]
pub struct Outcome {
    pub parameters: Map<String, Value>,
    pub data: Map<String, Value>,
    pub verdicts: Vec<Check>,
}

impl Outcome {
    pub fn param(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.parameters.insert(key.into(), serde_json::to_value(v).expect("parameter serializes"));
        self
    }

    pub fn datum(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.data.insert(key.into(), serde_json::to_value(v).expect("datum serializes"));
        self
    }

    pub fn verdict(&mut self, c: Check) -> &mut Self {
        self.verdicts.push(c);
        self
    }
}

/// FAIL wins; all-INDETERMINATE is reported as such; anything else passes.
pub fn summarize(verdicts: &[Check]) -> Status {
    if verdicts.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if !verdicts.is_empty() && verdicts.iter().all(|c| c.status == Status::Indeterminate) {
        Status::Indeterminate
    } else {
        Status::Pass
    }
}

pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Indeterminate => 3,
    }
}

/// Serializes with sorted keys; `serde_json::Map` is ordered by key.
pub fn render(value: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value).expect("report serializes")
    } else {
        serde_json::to_string(value).expect("report serializes")
    };
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_rules() {
        let p = Check::pass("a");
        let f = Check::new("b", Status::Fail);
        let i = Check::new("c", Status::Indeterminate);
        assert_eq!(summarize(&[]), Status::Pass);
        assert_eq!(summarize(&[p.clone(), i.clone()]), Status::Pass);
        assert_eq!(summarize(&[i.clone(), i.clone()]), Status::Indeterminate);
        assert_eq!(summarize(&[p, f, i]), Status::Fail);
    }

    #[test]
    fn keys_are_sorted() {
        let v = serde_json::json!({"zeta": 1, "alpha": {"y": 2, "b": 3}});
        assert_eq!(render(&v, false), "{\"alpha\":{\"b\":3,\"y\":2},\"zeta\":1}\n");
    }
}
