//! Reports: deterministic JSON documents carrying the resolved config, the tool version,
//! canonical values and residual norms. Nothing time-dependent goes in.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::series::reduce;
use crate::tate::NormExp;

pub const REPORT_SCHEMA: &str = "ffspecial.report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Pass,
    Fail,
    PrecisionUnreachable,
    ConfigError,
}

impl Status {
    #[must_use]
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::ConfigError => 2,
            Status::PrecisionUnreachable => 3,
        }
    }
    #[must_use]
    pub fn from_error(e: &Error) -> Status {
        match e.exit_code() {
            2 => Status::ConfigError,
            3 => Status::PrecisionUnreachable,
            _ => Status::Fail,
        }
    }
    /// Worst of two statuses: a failure outranks an unreachable precision.
    #[must_use]
    pub fn combine(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::PrecisionUnreachable => 1,
            Status::Fail => 2,
            Status::ConfigError => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// `log_q` of a norm as text: `-inf` for zero, `a/b` for an exact value, `<=a/b` for an upper bound.
#[must_use]
pub fn fmt_norm(n: NormExp, r: i64) -> String {
    match n {
        NormExp::Zero => "-inf".into(),
        NormExp::Exact(e) => fmt_frac(e, r),
        NormExp::Below(e) => format!("<={}", fmt_frac(e, r)),
    }
}

#[must_use]
pub fn fmt_frac(num: i64, r: i64) -> String {
    let (a, b) = reduce(num, r);
    if b == 1 {
        a.to_string()
    } else {
        format!("{a}/{b}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Residual norm as a `q`-exponent, for residual checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    /// Required bound as a `q`-exponent (residual at most this).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
}

impl Check {
    /// `‖x‖ ≤ q^{-v}` certified from a norm computed at numerator scale `r`.
    #[must_use]
    pub fn residual(name: impl Into<String>, n: NormExp, v: i64, r: i64) -> Check {
        Check { name: name.into(), pass: n.le(-v * r), residual: Some(fmt_norm(n, r)), bound: Some((-v).to_string()) }
    }
    #[must_use]
    pub fn flag(name: impl Into<String>, pass: bool) -> Check {
        Check { name: name.into(), pass, residual: None, bound: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
    #[serde(skip)]
    pub status: Status,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo { code: e.code().into(), message: e.to_string(), status: Status::from_error(e) }
    }
}

/// Result of one task or one acceptance criterion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub values: Vec<Value>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Outcome {
    pub fn value(&mut self, name: impl Into<String>, v: impl ToString) {
        self.values.push(Value { name: name.into(), value: v.to_string() });
    }
    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }
    #[must_use]
    pub fn status(&self) -> Status {
        let base = if self.checks.iter().all(|c| c.pass) { Status::Pass } else { Status::Fail };
        match &self.error {
            Some(e) => base.combine(e.status),
            None => base,
        }
    }
    /// Folds a fallible computation in: an error is recorded and stops the outcome.
    pub fn record(&mut self, r: crate::Result<()>) {
        if let Err(e) = r {
            self.error = Some(ErrorInfo::from(&e));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Default for Tool {
    fn default() -> Self {
        Tool { name: "ffspecial".into(), version: TOOL_VERSION.into() }
    }
}

/// Report of a single task run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: Tool,
    pub config: serde_json::Value,
    pub status: Status,
    pub exit_code: i32,
    pub seed: u64,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl Report {
    #[must_use]
    pub fn new(config: serde_json::Value, seed: u64, outcome: Outcome) -> Report {
        let status = outcome.status();
        Report {
            schema: REPORT_SCHEMA.into(),
            tool: Tool::default(),
            config,
            status,
            exit_code: status.exit_code(),
            seed,
            outcome,
        }
    }
    /// Pretty JSON with a trailing newline; identical inputs give identical bytes.
    #[must_use]
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_norm_text() {
        assert_eq!(fmt_norm(NormExp::Zero, 64), "-inf");
        assert_eq!(fmt_norm(NormExp::Exact(-96), 64), "-3/2");
        assert_eq!(fmt_norm(NormExp::Below(-1600), 64), "<=-25");
    }

    #[test]
    fn test_residual_check() {
        assert!(Check::residual("x", NormExp::Below(-1600), 25, 64).pass);
        assert!(!Check::residual("x", NormExp::Exact(-1599), 25, 64).pass);
    }

    #[test]
    fn test_status_order() {
        let mut o = Outcome::default();
        o.check(Check::flag("a", true));
        assert_eq!(o.status(), Status::Pass);
        o.error = Some(ErrorInfo::from(&Error::PrecisionUnreachable(String::new())));
        assert_eq!(o.status(), Status::PrecisionUnreachable);
        o.check(Check::flag("b", false));
        assert_eq!(o.status(), Status::Fail);
    }
}
