use serde::{Deserialize, Serialize};

/// Outcome of one checked identity or reconciliation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Verdict {
    /// Passes when `residual <= tol`.
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Verdict { name: name.into(), passed: residual <= tol, residual, tol, detail: String::new() }
    }

    /// Passes when `found == expected`; the residual is the absolute difference.
    pub fn exact(name: impl Into<String>, found: usize, expected: usize) -> Self {
        Verdict {
            name: name.into(),
            passed: found == expected,
            residual: found.abs_diff(expected) as f64,
            tol: 0.0,
            detail: format!("found {found}, expected {expected}"),
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed,
            residual: if passed { 0.0 } else { 1.0 },
            tol: 0.0,
            detail: detail.into(),
        }
    }

    pub fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::flag(name, false, detail)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} residual={:.3e} tol={:.1e}", self.name, self.residual, self.tol)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}
