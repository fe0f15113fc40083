//! Theoretical decay exponents and the torus wrap-around horizon.

use core::f64::consts::SQRT_2;

use crate::error::{CoreError, Result};

/// Families of norms with a predicted decay exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormFamily {
    /// `‖U‖₂`
    L2,
    /// `‖∂ₓU‖₂`, `‖∂ₜU‖₂` and their sum
    Gradient,
    /// `‖∂ₓ²PU‖₂`
    SecondGradient,
    /// `‖U‖∞`
    LInf,
}

impl NormFamily {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "l2" | "l2_total" | "l2_n" | "l2_v" | "l2_E" | "band_low" => NormFamily::L2,
            "grad" | "l2_grad" | "l2_dt" | "grad_dt" | "dt" => NormFamily::Gradient,
            "grad2" | "l2_grad2" => NormFamily::SecondGradient,
            "linf" | "linf_total" => NormFamily::LInf,
            other => return Err(CoreError::UnknownNorm(other.into())),
        })
    }
}

/// `σ = (3/2)(1/q − 1/2)`.
pub fn sigma(q: f64) -> f64 {
    1.5 * (1.0 / q - 0.5)
}

/// Predicted exponent of `t` for data in `L_q`, `q ∈ [1, 2]`.
pub fn theoretical_exponent(norm: &str, q: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&q) {
        return Err(CoreError::InvalidParameter { name: "q", reason: "must lie in [1, 2]" });
    }
    Ok(match NormFamily::parse(norm)? {
        NormFamily::L2 => -sigma(q),
        NormFamily::Gradient => -sigma(q) - 0.5,
        NormFamily::SecondGradient | NormFamily::LInf => -1.5 / q,
    })
}

/// Fastest group speed of the linearized flow, read off `κ₊ ≈ √2|ξ|i` at small `|ξ|`.
pub const ACOUSTIC_SPEED: f64 = SQRT_2;

/// Latest time at which the periodic box still behaves like ℝ³ for data of the
/// given effective radius centred in `[−L, L)³`.
pub fn wraparound_time(box_half_width: f64, effective_radius: f64) -> f64 {
    (box_half_width / ACOUSTIC_SPEED - effective_radius).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_exponents() {
        assert!((theoretical_exponent("l2_total", 1.0).unwrap() + 0.75).abs() < 1e-15);
        assert_eq!(theoretical_exponent("l2_total", 2.0).unwrap(), 0.0);
        assert!((theoretical_exponent("linf_total", 1.0).unwrap() + 1.5).abs() < 1e-15);
        assert!((theoretical_exponent("l2_grad", 1.0).unwrap() + 1.25).abs() < 1e-15);
        assert!(theoretical_exponent("bogus", 1.0).is_err());
        assert!(theoretical_exponent("l2", 0.5).is_err());
    }

    #[test]
    fn monotone_in_inverse_q() {
        for name in ["l2", "grad", "linf", "grad2"] {
            let mut prev = f64::INFINITY;
            for i in 0..=20 {
                let inv_q = 0.5 + 0.5 * i as f64 / 20.0;
                let e = theoretical_exponent(name, 1.0 / inv_q).unwrap();
                assert!(e <= prev + 1e-15);
                prev = e;
            }
        }
    }

    #[test]
    fn wraparound() {
        assert!((wraparound_time(60.0, 0.0) - 42.426_406_871_192_85).abs() < 1e-12);
        assert!((wraparound_time(120.0, 0.0) - 2.0 * wraparound_time(60.0, 0.0)).abs() < 1e-12);
        assert_eq!(wraparound_time(1.0, 5.0), 0.0);
    }
}
