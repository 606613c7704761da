use std::fmt::{self, Write as _};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub slack: Option<f64>,
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, status: Status) -> Self {
        CheckResult {
            name: name.to_string(),
            status,
            measured: None,
            bound: None,
            slack: None,
            detail: None,
        }
    }

    pub fn pass_if(name: &str, ok: bool) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn measured(mut self, value: f64) -> Self {
        self.measured = Some(value);
        self
    }

    pub fn bound(mut self, bound: f64, slack: f64) -> Self {
        self.bound = Some(bound);
        self.slack = Some(slack);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Outcome of all checks on one run. `overall` is false iff any check failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub overall: bool,
}

impl Report {
    pub fn new(checks: Vec<CheckResult>) -> Self {
        let overall = checks.iter().all(|c| c.status != Status::Fail);
        Report { checks, overall }
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|c| c.status)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let num = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>10}  {:>10}  {:>7}  detail",
            "check", "status", "measured", "bound", "slack"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<width$}  {:<6}  {:>10}  {:>10}  {:>7}  {}",
                c.name,
                c.status.to_string(),
                num(c.measured),
                num(c.bound),
                num(c.slack),
                c.detail.as_deref().unwrap_or("")
            );
        }
        let _ = writeln!(out, "overall: {}", if self.overall { "pass" } else { "FAIL" });
        out
    }
}
