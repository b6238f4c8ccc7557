//! Machine-readable reports. Everything serialized is a function of the
//! scenario and the seed; wall-clock timing is kept out of the JSON.

use std::time::Duration;

use serde::Serialize;

use crate::checks::CheckSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Holds given a cited external fact that is not computed here.
    AxiomCited,
    /// A one-sided test was inconclusive.
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub check: &'static str,
    pub property: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "is_zero")]
    pub cases: usize,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl CheckResult {
    pub fn new(name: String, spec: &CheckSpec) -> Self {
        CheckResult {
            name,
            check: spec.tag(),
            property: spec.property(),
            status: Status::Pass,
            cases: 0,
            detail: String::new(),
            witness: None,
        }
    }

    pub fn pass(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Pass;
        self.detail = detail.into();
        self
    }

    pub fn fail(mut self, detail: impl Into<String>, witness: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.detail = detail.into();
        self.witness = Some(witness.into());
        self
    }

    pub fn with_status(mut self, status: Status, detail: impl Into<String>) -> Self {
        self.status = status;
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub axiom_cited: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub counts: Counts,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn new(scenario: impl Into<String>, seed: u64, checks: Vec<CheckResult>, elapsed: Duration) -> Self {
        let mut counts = Counts { total: checks.len(), ..Counts::default() };
        for c in &checks {
            match c.status {
                Status::Pass => counts.pass += 1,
                Status::Fail => counts.fail += 1,
                Status::AxiomCited => counts.axiom_cited += 1,
                Status::Unknown => counts.unknown += 1,
            }
        }
        Report { scenario: scenario.into(), seed, counts, checks, elapsed }
    }

    pub fn passed(&self) -> bool {
        self.counts.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::AxiomCited => "axiom-cited",
                Status::Unknown => "unknown",
            };
            out.push_str(&format!("[{status}] {}: {}\n", c.name, c.detail));
            if let Some(w) = &c.witness {
                out.push_str(&format!("    witness: {w}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} checks, {} pass, {} fail, {} axiom-cited, {} unknown (seed {}, {:.2?})\n",
            self.scenario,
            self.counts.total,
            self.counts.pass,
            self.counts.fail,
            self.counts.axiom_cited,
            self.counts.unknown,
            self.seed,
            self.elapsed
        ));
        out
    }
}
