//! Verification report lines shared by the certificate checkers and the CLI.

use std::fmt;

/// Outcome of a single named numerical check.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    /// Largest observed violation of the checked inequality (0 when clean).
    pub violation: f64,
    /// Tolerance the violation was compared against.
    pub tol: f64,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, violation: f64, tol: f64) -> Self {
        CheckItem {
            name: name.into(),
            pass: violation <= tol,
            violation,
            tol,
        }
    }
}

impl fmt::Display for CheckItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {:e}",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.violation
        )
    }
}

/// True iff every item passed.
pub fn all_pass(items: &[CheckItem]) -> bool {
    items.iter().all(|c| c.pass)
}
