use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    DivergentAsExpected,
}

/// Where the expected value of a case comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    /// A closed-form value.
    ClosedForm,
    /// An algebraic identity that must hold exactly.
    Identity,
    /// A structural fact (a table, a rank, a dichotomy).
    Structure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub expected: f64,
    /// Bound on `|measured − expected|`.
    pub tolerance: f64,
    pub oracle: Oracle,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed_trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Case {
    pub fn within(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64, oracle: Oracle) -> Self {
        let ok = (measured - expected).abs() <= tolerance;
        Case {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            expected,
            tolerance,
            oracle,
            trials: None,
            passed_trials: None,
            detail: None,
        }
    }

    /// A worst-case error over `trials` repetitions, each required to be `≤ tolerance`.
    pub fn trials(name: impl Into<String>, errors: &[f64], tolerance: f64, oracle: Oracle) -> Self {
        let worst = errors.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let passed = errors.iter().filter(|&&e| e <= tolerance).count();
        let mut c = Case::within(name, worst, 0.0, tolerance, oracle);
        if passed != errors.len() {
            c.status = Status::Fail;
        }
        c.trials = Some(errors.len());
        c.passed_trials = Some(passed);
        c
    }

    /// A one-sided bound `measured ≥ bound`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, oracle: Oracle) -> Self {
        let mut c = Case::within(name, measured, bound, 0.0, oracle);
        c.status = if measured >= bound { Status::Pass } else { Status::Fail };
        c
    }

    pub fn flag(name: impl Into<String>, ok: bool, oracle: Oracle) -> Self {
        Case::within(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, oracle)
    }

    /// A divergence that the theory predicts; passes only if it was observed.
    pub fn expect_divergent(name: impl Into<String>, diverged: bool) -> Self {
        let mut c = Case::flag(name, diverged, Oracle::Structure);
        if diverged {
            c.status = Status::DivergentAsExpected;
        }
        c
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// A case for a computation that failed outright.
    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Case::within(name, f64::NAN, 0.0, 0.0, Oracle::Identity).with_detail(err.to_string())
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
    pub passed: usize,
    pub failed: usize,
    /// Wall-clock time; shown in the text table only, so that the JSON is a
    /// pure function of the arguments.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn new(suite: &str, seed: u64, cases: Vec<Case>, elapsed: Duration) -> Self {
        let passed = cases.iter().filter(|c| c.passed()).count();
        let failed = cases.len() - passed;
        Report { schema: 1, suite: suite.to_string(), seed, cases, passed, failed, elapsed }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn table(&self) -> String {
        let width = self.cases.iter().map(|c| c.name.chars().count()).max().unwrap_or(4).max(4);
        let mut s = String::new();
        let _ = writeln!(s, "suite {} (seed {})", self.suite, self.seed);
        let _ = writeln!(s, "{:<width$}  {:<21}  {:>11}  {:>11}  {:>9}", "case", "status", "measured", "expected", "tol");
        for c in &self.cases {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::DivergentAsExpected => "divergent-as-expected",
            };
            let trials = match (c.passed_trials, c.trials) {
                (Some(p), Some(t)) => format!("  [{p}/{t}]"),
                _ => String::new(),
            };
            let _ = writeln!(
                s,
                "{:<width$}  {:<21}  {:>11.4e}  {:>11.4e}  {:>9.1e}{trials}",
                c.name, status, c.measured, c.expected, c.tolerance
            );
            if let (Status::Fail, Some(d)) = (c.status, &c.detail) {
                let _ = writeln!(s, "{:width$}  ↳ {d}", "");
            }
        }
        let _ = writeln!(s, "{} passed, {} failed in {:.2?}", self.passed, self.failed, self.elapsed);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_cases_count_failures() {
        let c = Case::trials("x", &[1e-12, 2e-10, 5e-9], 1e-9, Oracle::Identity);
        assert_eq!(c.status, Status::Fail);
        assert_eq!((c.trials, c.passed_trials), (Some(3), Some(2)));
        let c = Case::trials("x", &[1e-12, f64::NAN], 1e-9, Oracle::Identity);
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn divergent_cases() {
        assert_eq!(Case::expect_divergent("d", true).status, Status::DivergentAsExpected);
        assert_eq!(Case::expect_divergent("d", false).status, Status::Fail);
    }
}
