//! Smooth partition of unity in `|ξ|` separating low, middle and high bands.
//!
//! `φ₀ = 1` on `|ξ| ≤ r₁/2`, `0` on `|ξ| ≥ r₁`; `φ∞ = 0` on `|ξ| ≤ r₂`,
//! `1` on `|ξ| ≥ 2r₂`; `φ_M = 1 − φ₀ − φ∞`. Transitions are C^∞ and built
//! from the `exp(−1/s)` profile.

use crate::error::{CoreError, Result};

fn flat(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        libm::exp(-1.0 / s)
    }
}

/// C^∞ step: 0 for `s ≤ 0`, 1 for `s ≥ 1`.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = flat(s);
        a / (a + flat(1.0 - s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandCutoffs {
    pub r1: f64,
    pub r2: f64,
}

impl BandCutoffs {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0) || !(r1 < r2) || !r2.is_finite() {
            return Err(CoreError::InvalidParameter { name: "bands", reason: "need 0 < r1 < r2" });
        }
        Ok(Self { r1, r2 })
    }

    pub fn low(&self, xi: f64) -> f64 {
        1.0 - smooth_step((xi - 0.5 * self.r1) / (0.5 * self.r1))
    }

    pub fn high(&self, xi: f64) -> f64 {
        smooth_step((xi - self.r2) / self.r2)
    }

    pub fn mid(&self, xi: f64) -> f64 {
        1.0 - self.low(xi) - self.high(xi)
    }

    /// `[φ₀, φ_M, φ∞]` at `|ξ|`.
    pub fn weights(&self, xi: f64) -> [f64; 3] {
        let lo = self.low(xi);
        let hi = self.high(xi);
        [lo, 1.0 - lo - hi, hi]
    }
}
