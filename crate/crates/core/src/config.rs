//! Numerical tolerances shared by every module.
//!
//! Validation routines read the compiled-in defaults; the verification
//! harness threads an overridable copy through each check so a run can
//! tighten or loosen the inequality slack without recompiling.

use serde::{Deserialize, Serialize};

/// Largest matrix side length any object may carry.
pub const MAX_DIMENSION: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `max |m - m^dagger|` accepted as Hermitian.
    pub hermiticity: f64,
    /// `max |u^dagger u - I|` accepted as unitary.
    pub unitarity: f64,
    /// Eigenvalues in `[-psd_clip, 0)` are treated as round-off and clipped.
    pub psd_clip: f64,
    /// Allowed |trace - 1| and |norm - 1|.
    pub trace: f64,
    /// Slack for exact entropy inequalities.
    pub inequality_slack: f64,
    /// Slack for checks that depend on the discord optimizer.
    pub optimizer_slack: f64,
    pub max_dimension: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-10,
        unitarity: 1e-9,
        psd_clip: 1e-9,
        trace: 1e-10,
        inequality_slack: 1e-8,
        optimizer_slack: 1e-6,
        max_dimension: MAX_DIMENSION,
    };

    /// Copy with the exact-inequality slack replaced.
    pub fn with_inequality_slack(mut self, slack: f64) -> Self {
        self.inequality_slack = slack;
        self
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
