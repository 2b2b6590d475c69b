//! Validation reports shared by every structure.

use std::fmt;

use serde::Serialize;

/// One failed axiom, with the first offending basis tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub subject: String,
    pub checks: Vec<String>,
    pub failures: Vec<Failure>,
}

impl Validation {
    pub fn new(subject: impl Into<String>) -> Self {
        Validation {
            subject: subject.into(),
            checks: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Record a check; `failure` is the first offending tuple, if any.
    pub fn record(&mut self, check: &str, failure: Option<String>) {
        self.checks.push(check.to_string());
        if let Some(detail) = failure {
            self.failures.push(Failure {
                check: check.to_string(),
                detail,
            });
        }
    }

    pub fn fail(&mut self, check: &str, detail: impl Into<String>) {
        self.record(check, Some(detail.into()));
    }

    /// Fold another report in, prefixing its checks.
    pub fn absorb(&mut self, prefix: &str, other: Validation) {
        for c in other.checks {
            self.checks.push(format!("{prefix}: {c}"));
        }
        for f in other.failures {
            self.failures.push(Failure {
                check: format!("{prefix}: {}", f.check),
                detail: f.detail,
            });
        }
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "{}: ok ({} checks)", self.subject, self.checks.len())
        } else {
            writeln!(f, "{}: FAILED", self.subject)?;
            for fail in &self.failures {
                writeln!(f, "  {}: {}", fail.check, fail.detail)?;
            }
            Ok(())
        }
    }
}

/// Outcome of a criterion that may be decided exactly, by certificate, or
/// only on samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Certified,
    SpotChecked,
    Refuted,
    Conditional,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Whether this verdict counts towards an overall pass.
    pub fn is_positive(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Certified | Verdict::SpotChecked | Verdict::NotApplicable)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Certified => "CERTIFIED",
            Verdict::SpotChecked => "SPOT-CHECKED",
            Verdict::Refuted => "REFUTED",
            Verdict::Conditional => "CONDITIONAL",
            Verdict::NotApplicable => "N/A",
        };
        f.write_str(s)
    }
}
