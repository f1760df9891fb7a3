//! Named postcondition checks, collected so callers can print or assert them.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    /// Records `value ≤ bound`.
    pub fn at_most(&mut self, name: &str, value: f64, bound: f64) {
        let (value, bound) = (value + 0.0, bound + 0.0);
        self.push(name, value <= bound, format!("{value:.12e} <= {bound:.12e}"));
    }

    /// Records `|a − b| ≤ tol`.
    pub fn close(&mut self, name: &str, a: f64, b: f64, tol: f64) {
        let (a, b) = (a + 0.0, b + 0.0);
        self.push(name, (a - b).abs() <= tol, format!("|{a:.12e} - {b:.12e}| <= {tol:.1e}"));
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}
