//! `φ₁(κ, t) = (e^{κt} − 1)/κ`, the integral `∫₀ᵗ e^{κs} ds`.

use crate::C64;

/// Below this `|κt|` the Taylor branch is used.
pub const PHI1_SERIES_THRESHOLD: f64 = 1e-4;

/// `e^z − 1` without cancellation for small `|z|`.
pub fn expm1_c(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    let em1 = libm::expm1(x);
    let half_sin = libm::sin(0.5 * y);
    let re = em1 * libm::cos(y) - 2.0 * half_sin * half_sin;
    let im = libm::exp(x) * libm::sin(y);
    C64::new(re, im)
}

/// `φ₁(κ, t)`; exactly `t` when `κ = 0`.
pub fn phi1(kappa: C64, t: f64) -> C64 {
    let z = kappa * t;
    if z.norm() < PHI1_SERIES_THRESHOLD {
        // t (1 + z/2 + z²/6 + z³/24 + z⁴/120)
        let series = C64::new(1.0, 0.0)
            + z * (C64::new(0.5, 0.0)
                + z * (C64::new(1.0 / 6.0, 0.0) + z * (C64::new(1.0 / 24.0, 0.0) + z / 120.0)));
        series * t
    } else {
        expm1_c(z) / kappa
    }
}

/// `sinh(δt/2)/(δ/2)`, the divided difference of `e^{κt}` across a pair
/// of eigenvalues split by `δ`. Tends to `t` as `δ → 0`.
pub fn sinhc(delta: C64, t: f64) -> C64 {
    let w = delta * (0.5 * t);
    if w.norm() < 1e-3 {
        let w2 = w * w;
        (C64::new(1.0, 0.0) + w2 / 6.0 + w2 * w2 / 120.0 + w2 * w2 * w2 / 5040.0) * t
    } else {
        w.sinh() / (delta * 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi1_at_zero_is_t() {
        assert_eq!(phi1(C64::new(0.0, 0.0), 2.5), C64::new(2.5, 0.0));
    }

    #[test]
    fn phi1_matches_quadrature() {
        // composite Simpson on ∫₀ᵗ e^{κs} ds
        for &(re, im, t) in &[(-1.0, 1.0, 1.0), (-3e-5, 2e-5, 1.0), (-0.2, 4.0, 2.0), (-40.0, 0.0, 0.5)] {
            let k = C64::new(re, im);
            let n = 20_000;
            let h = t / n as f64;
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..=n {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += (k * (i as f64 * h)).exp() * w;
            }
            acc *= h / 3.0;
            let got = phi1(k, t);
            assert!((got - acc).norm() <= 1e-10 * acc.norm(), "{k} {got} {acc}");
        }
    }

    #[test]
    fn phi1_branches_agree_at_threshold() {
        let t = 1.0;
        for &arg in &[0.3f64, 1.1, 2.9] {
            let k = C64::from_polar(PHI1_SERIES_THRESHOLD, arg);
            for z in [k * 0.999_999, k * 1.000_001] {
                let mut term = C64::new(t, 0.0);
                let mut reference = term;
                for j in 2..12 {
                    term = term * z * t / j as f64;
                    reference += term;
                }
                assert!((phi1(z, t) - reference).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn expm1_small_argument() {
        let z = C64::new(1e-12, -2e-12);
        let r = expm1_c(z);
        assert!((r - z).norm() < 1e-23);
    }

    #[test]
    fn sinhc_limits() {
        assert!((sinhc(C64::new(0.0, 0.0), 3.0) - C64::new(3.0, 0.0)).norm() < 1e-15);
        let d = C64::new(0.0, 2.0);
        // sinh(i t)/(i) = sin t
        let got = sinhc(d, 1.3);
        assert!((got - C64::new(libm::sin(1.3), 0.0)).norm() < 1e-14);
    }
}
