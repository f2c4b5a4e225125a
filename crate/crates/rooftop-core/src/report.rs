//! Structured results for the verification routines.

use alloc::string::String;
use alloc::vec::Vec;

/// How a check's hypotheses interacted with the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    /// The hypotheses held and the conclusion was tested.
    Checked,
    /// The conclusion was not exercised (e.g. an empty contact set
    /// leaves nothing to measure); `pass` is true by convention.
    Vacuous,
    /// The data violates a hypothesis of the statement being checked,
    /// so the conclusion was not tested.
    HypothesisNotMet,
    /// The inputs do not describe a well-posed check at all (wrong
    /// grids, too few nodes).
    PreconditionFailed,
}

impl core::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            CheckStatus::Checked => "checked",
            CheckStatus::Vacuous => "vacuous",
            CheckStatus::HypothesisNotMet => "hypothesis not met",
            CheckStatus::PreconditionFailed => "precondition failed",
        })
    }
}

/// Outcome of one verification routine.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    /// Stable identifier of the check, e.g. `"cushion"`.
    pub check: &'static str,
    pub status: CheckStatus,
    pub pass: bool,
    /// Magnitude of the worst violation found, zero when none.
    pub worst_violation: f64,
    /// Grid index of the worst violation, empty when none.
    pub location: Vec<usize>,
    /// Named quantities measured along the way, for human inspection.
    pub metrics: Vec<(String, f64)>,
}

impl CheckReport {
    pub fn passing(check: &'static str) -> Self {
        CheckReport {
            check,
            status: CheckStatus::Checked,
            pass: true,
            worst_violation: 0.0,
            location: Vec::new(),
            metrics: Vec::new(),
        }
    }

    pub fn vacuous(check: &'static str) -> Self {
        CheckReport { status: CheckStatus::Vacuous, ..CheckReport::passing(check) }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn with_metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.push((String::from(name), value));
        self
    }
}

impl core::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{}: {} ({})",
            self.check,
            if self.pass { "pass" } else { "FAIL" },
            self.status
        )?;
        if !self.pass {
            write!(f, " worst violation {:.3e}", self.worst_violation)?;
            if !self.location.is_empty() {
                write!(f, " at {:?}", self.location)?;
            }
        }
        for (name, value) in &self.metrics {
            write!(f, " {name}={value:.6}")?;
        }
        Ok(())
    }
}
