use std::fmt;

use crate::error::Result;
use crate::series::{Discrepancy, TruncatedSeries};

/// Whether an identity is a theorem or only conjectured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Proven,
    Conjecture,
}

/// Outcome of comparing two sides of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    /// Number of coefficient comparisons, points or samples covered.
    pub checked: usize,
    pub max_degree: u32,
    /// First mismatch, as a readable string.
    pub failure: Option<String>,
}

impl CheckReport {
    pub fn new(name: &str, status: Status) -> Self {
        CheckReport { name: name.to_string(), status, checked: 0, max_degree: 0, failure: None }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Records a series comparison; keeps the first failure.
    pub fn compare(&mut self, label: &str, left: &TruncatedSeries, right: &TruncatedSeries) -> Result<()> {
        let diff = left.first_difference(right)?;
        self.checked += left.len().max(right.len());
        self.max_degree = self.max_degree.max(left.order().min(right.order()));
        if let Some(d) = diff {
            self.fail(format!("{label}: {d}"));
        }
        Ok(())
    }

    pub fn fail(&mut self, msg: String) {
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.max_degree = self.max_degree.max(other.max_degree);
        if let Some(f) = other.failure {
            self.fail(f);
        }
    }

    pub fn discrepancy(label: &str, d: &Discrepancy) -> String {
        format!("{label}: {d}")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match (self.passed(), self.status) {
            (true, _) => "PASS",
            (false, Status::Proven) => "FAIL",
            (false, Status::Conjecture) => "DEVIATES",
        };
        write!(f, "{verdict} {} ({} checks, degree {})", self.name, self.checked, self.max_degree)?;
        if let Some(msg) = &self.failure {
            write!(f, ": {msg}")?;
        }
        Ok(())
    }
}
