use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Largest observed value of a functional against a claimed upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub functional_name: String,
    pub max_observed: f64,
    pub bound: f64,
    pub tolerance: f64,
    /// Description of the Schwarz function (or point) attaining `max_observed`.
    pub witness: String,
    pub samples: usize,
    pub verdict: Verdict,
}

impl BoundReport {
    /// Verdict is `Violated` iff `max_observed > bound + tolerance`; NaN counts
    /// as a violation.
    pub fn new(
        functional_name: impl Into<String>,
        max_observed: f64,
        bound: f64,
        tolerance: f64,
        witness: impl Into<String>,
        samples: usize,
    ) -> Self {
        let verdict = if max_observed <= bound + tolerance { Verdict::Holds } else { Verdict::Violated };
        Self {
            functional_name: functional_name.into(),
            max_observed,
            bound,
            tolerance,
            witness: witness.into(),
            samples,
            verdict,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: max {:.12} vs bound {:.12} over {} samples [{}] (witness {})",
            self.functional_name,
            self.max_observed,
            self.bound,
            self.samples,
            match self.verdict {
                Verdict::Holds => "holds",
                Verdict::Violated => "VIOLATED",
            },
            self.witness
        )
    }
}
