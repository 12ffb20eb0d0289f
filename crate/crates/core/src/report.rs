//! Verification reports shared by every suite.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INDETERMINATE")]
    Indeterminate,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Indeterminate => "INDETERMINATE",
        })
    }
}

/// A counterexample: what was evaluated and the nonzero value obtained, both
/// rendered in the expression grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub input: String,
    pub value: String,
    /// Number of tensor factors of `value` (1 for path-algebra elements,
    /// 0 for polynomials, which are rendered but not re-parsed).
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub witnesses: Vec<Witness>,
    pub elapsed_ms: u128,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Pass, detail: detail.into(), witnesses: Vec::new(), elapsed_ms: 0 }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witnesses: Vec<Witness>) -> Check {
        let mut witnesses = witnesses;
        if witnesses.is_empty() {
            witnesses.push(Witness { input: "unavailable".into(), value: "unavailable".into(), arity: 0 });
        }
        Check { name: name.into(), status: Status::Fail, detail: detail.into(), witnesses, elapsed_ms: 0 }
    }

    pub fn indeterminate(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Indeterminate,
            detail: detail.into(),
            witnesses: Vec::new(),
            elapsed_ms: 0,
        }
    }

    /// PASS when `witnesses` is empty, FAIL otherwise.
    pub fn from_witnesses(name: impl Into<String>, detail: impl Into<String>, witnesses: Vec<Witness>) -> Check {
        if witnesses.is_empty() {
            Check::pass(name, detail)
        } else {
            Check::fail(name, detail, witnesses)
        }
    }

    /// Run `f` and record its wall time on the produced check.
    pub fn timed(f: impl FnOnce() -> Check) -> Check {
        let start = Instant::now();
        let mut c = f();
        c.elapsed_ms = start.elapsed().as_millis();
        c
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Report {
        Report { suite: suite.into(), parameters: Vec::new(), checks: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for (k, v) in &self.parameters {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!("{:<14} {} ({} ms)", c.status.to_string(), c.name, c.elapsed_ms));
            if !c.detail.is_empty() {
                out.push_str(&format!(": {}", c.detail));
            }
            out.push('\n');
            for w in c.witnesses.iter().take(5) {
                out.push_str(&format!("    witness {} = {}\n", w.input, w.value));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_always_has_a_witness() {
        let c = Check::fail("x", "", Vec::new());
        assert_eq!(c.witnesses.len(), 1);
        let mut r = Report::new("s");
        r.push(c);
        r.push(Check::pass("y", "ok"));
        assert!(r.any_fail());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
