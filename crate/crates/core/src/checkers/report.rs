use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Satisfied,
    Violated,
    InsufficientInformation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::InsufficientInformation => "insufficient-information",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Condition {
    /// Passes when `|residual| ≤ tolerance`.
    pub fn numeric(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
        }
    }

    /// Exact symbolic condition; `residual` is informational.
    pub fn exact(name: impl Into<String>, residual: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance: 0.0,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct DegreeReport {
    /// `(label, deg)` for every input.
    pub degrees: Vec<(String, f64)>,
    pub inequality: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub conditions: Vec<Condition>,
    pub degree: DegreeReport,
}

impl CheckReport {
    /// Satisfied iff every condition passes.
    pub fn from_conditions(check: impl Into<String>, conditions: Vec<Condition>, degree: DegreeReport) -> Self {
        let verdict = if conditions.iter().all(|c| c.pass) {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        };
        Self {
            check: check.into(),
            verdict,
            conditions,
            degree,
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }

    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.pass)
    }
}

fn fmt_deg(d: f64) -> String {
    if d == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{d}")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        for (label, d) in &self.degree.degrees {
            writeln!(f, "deg({label}) = {}", fmt_deg(*d))?;
        }
        if !self.degree.inequality.is_empty() {
            writeln!(
                f,
                "degree bound {}: {}",
                self.degree.inequality,
                if self.degree.holds { "holds" } else { "fails" }
            )?;
        }
        for c in &self.conditions {
            writeln!(
                f,
                "  [{}] {}: residual {:.3e} (tol {:.1e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance
            )?;
        }
        Ok(())
    }
}
