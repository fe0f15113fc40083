use crate::error::{CoreError, Result};

/// Viscosities and pressure-law exponent.
///
/// The pressure law is `P(ρ) = ρ^γ / γ`, so `P′(1) = 1` and the acoustic
/// rescaling is the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub mu: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl PhysParams {
    pub fn new(mu: f64, lambda: f64, gamma: f64) -> Result<Self> {
        let p = Self { mu, lambda, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(CoreError::InvalidParameter { name: "mu", reason: "must be positive" });
        }
        if !self.lambda.is_finite() || 2.0 * self.mu + 3.0 * self.lambda < 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "lambda",
                reason: "2 mu + 3 lambda must be nonnegative",
            });
        }
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(CoreError::InvalidParameter { name: "gamma", reason: "must exceed 1" });
        }
        Ok(())
    }

    /// Longitudinal viscosity `2μ + λ`.
    #[inline]
    pub fn nu(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// Default low-band radius `r₁ = √2 / (2μ + λ)`.
    pub fn default_r1(&self) -> f64 {
        core::f64::consts::SQRT_2 / self.nu()
    }

    /// Default high-band radius `r₂ = 4 / (2μ + λ)`.
    pub fn default_r2(&self) -> f64 {
        4.0 / self.nu()
    }

    /// `|ξ|` where the compressible eigenvalues coalesce.
    pub fn compressible_degenerate_xi(&self) -> f64 {
        2.0 * core::f64::consts::SQRT_2 / self.nu()
    }

    /// `|ξ|` where the shear eigenvalues coalesce.
    pub fn shear_degenerate_xi(&self) -> f64 {
        2.0 / self.mu
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { mu: 1.0, lambda: 0.0, gamma: 1.4 }
    }
}
