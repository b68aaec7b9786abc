//! Outcome of a single verification step.

use crate::algebra::GradedPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// The identity may hold modulo field equations, but no certificate was given.
    UnverifiedOnShell,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::UnverifiedOnShell => "unverified-on-shell",
        }
    }
}

/// One labelled result, with nonzero residual components keyed by a
/// printable target (usually a generator in source syntax).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub status: Status,
    pub residual: Vec<(String, GradedPoly)>,
    pub note: Option<String>,
}

impl Outcome {
    pub fn pass(label: impl Into<String>) -> Outcome {
        Outcome { label: label.into(), status: Status::Pass, residual: Vec::new(), note: None }
    }

    /// Pass iff every residual is zero; zero residuals are dropped.
    pub fn from_residuals(label: impl Into<String>, residual: Vec<(String, GradedPoly)>) -> Outcome {
        let residual: Vec<_> = residual.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let status = if residual.is_empty() { Status::Pass } else { Status::Fail };
        Outcome { label: label.into(), status, residual, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Outcome {
        self.note = Some(note.into());
        self
    }

    pub fn with_status(mut self, status: Status) -> Outcome {
        self.status = status;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// True iff all outcomes pass.
pub fn all_pass(outcomes: &[Outcome]) -> bool {
    outcomes.iter().all(Outcome::passed)
}
