use serde::{Deserialize, Serialize};

/// Outcome of a single numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
    pub seed: u64,
}

impl VerificationReport {
    /// Deviation-type check: passes when `measured ≤ tolerance`.
    pub fn deviation(check: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            pass: measured <= tolerance,
            measured,
            tolerance,
            witness: None,
            samples: 1,
            seed: 0,
        }
    }

    /// Strict upper-bound check: passes when `measured < bound`.
    pub fn strict_below(check: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { pass: measured < bound, ..Self::deviation(check, measured, bound) }
    }

    pub fn with_witness(mut self, witness: Vec<f64>) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_samples(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }
}

/// Sorts reports by check name; the sort is stable so per-point order survives.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| a.check.cmp(&b.check));
}
