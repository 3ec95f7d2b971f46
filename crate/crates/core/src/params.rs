use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A weighted Bergman space `A^p_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub p: f64,
    pub alpha: f64,
}

impl SpaceParams {
    /// Requires `p > 0` and `α > −1` (finite weight measure).
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return domain(format!("p must be a positive real, got {p}"));
        }
        if !(alpha.is_finite() && alpha > -1.0) {
            return domain(format!("alpha must exceed -1, got {alpha}"));
        }
        Ok(Self { p, alpha })
    }

    /// `1 < α + 2 < p`, the range where the Hilbert matrix operator is bounded.
    pub fn is_bounded(&self) -> bool {
        let s = self.alpha + 2.0;
        1.0 < s && s < self.p
    }

    /// The exponent `(α + 2)/p`.
    pub fn critical_exponent(&self) -> f64 {
        (self.alpha + 2.0) / self.p
    }

    pub(crate) fn require_bounded(&self) -> Result<()> {
        if self.is_bounded() {
            Ok(())
        } else {
            domain("unbounded: requires 1 < alpha+2 < p")
        }
    }
}
