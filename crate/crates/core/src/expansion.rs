//! Small- and large-frequency expansions of the compressible eigenvalues and
//! bounds on their real parts.

use core::f64::consts::SQRT_2;

use crate::block::{eigen_compressible, eigen_shear};
use crate::error::{CoreError, Result};
use crate::fit::{loglog_slope, SlopeFit};
use crate::params::PhysParams;
use alloc::vec::Vec;

pub const TAYLOR_MIN_ORDER: f64 = 2.9;
pub const LAURENT_MAX_ORDER: f64 = -3.9;

/// Residuals of an expansion over a sample set and their fitted log-log order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFit {
    pub samples: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fit: SlopeFit,
}

impl ExpansionFit {
    pub fn order(&self) -> f64 {
        self.fit.slope
    }
}

/// `|κ₊ − (−(μ+λ/2)|ξ|² + √2 i|ξ|)|` for one frequency.
pub fn taylor_remainder(params: &PhysParams, xi: f64) -> Result<f64> {
    let k = eigen_compressible(params, xi)?.kappa_plus;
    let re = k.re + 0.5 * params.nu() * xi * xi;
    let im = k.im - SQRT_2 * xi;
    Ok(libm::hypot(re, im))
}

/// `|κ₊ + 2/ν + 4/(ν³|ξ|²)|` for one frequency, `ν = 2μ + λ`.
///
/// With `ε = 8/(ν|ξ|)²` and `s = √(1 − ε)` one has `κ₊ = −(4/ν)/(1 + s)`, and the
/// remainder equals `(2/ν)·ε²(3 + s)/(4(1 + s)³)`, which is evaluated here
/// because it carries no cancellation.
pub fn laurent_remainder(params: &PhysParams, xi: f64) -> Result<f64> {
    let nu = params.nu();
    let eps = 8.0 / (nu * nu * xi * xi);
    if !(eps < 1.0) {
        return Err(CoreError::SampleOutOfRegion { value: xi, region: "overdamped" });
    }
    let s = libm::sqrt(1.0 - eps);
    let one_s = 1.0 + s;
    Ok((2.0 / nu) * eps * eps * (3.0 + s) / (4.0 * one_s * one_s * one_s))
}

fn check_samples(samples: &[f64], ok: impl Fn(f64) -> bool, region: &'static str) -> Result<()> {
    if samples.is_empty() {
        return Err(CoreError::EmptySamples);
    }
    match samples.iter().find(|x| !ok(**x)) {
        Some(&value) => Err(CoreError::SampleOutOfRegion { value, region }),
        None => Ok(()),
    }
}

/// Fitted order of the small-frequency expansion `κ₊ ≈ −(μ+λ/2)|ξ|² + √2 i|ξ|`.
pub fn taylor_residual(params: &PhysParams, samples: &[f64]) -> Result<ExpansionFit> {
    params.validate()?;
    let edge = params.compressible_degenerate_xi();
    check_samples(samples, |x| x > 0.0 && x < edge, "oscillatory")?;
    let residuals = samples.iter().map(|x| taylor_remainder(params, *x)).collect::<Result<Vec<_>>>()?;
    let fit = loglog_slope(samples, &residuals)?;
    Ok(ExpansionFit { samples: samples.to_vec(), residuals, fit })
}

/// Fitted order of the large-frequency expansion `κ₊ ≈ −2/ν − 4/(ν³|ξ|²)`.
pub fn laurent_residual(params: &PhysParams, samples: &[f64]) -> Result<ExpansionFit> {
    params.validate()?;
    let edge = params.compressible_degenerate_xi();
    check_samples(samples, |x| x > edge && x.is_finite(), "overdamped")?;
    let residuals = samples.iter().map(|x| laurent_remainder(params, *x)).collect::<Result<Vec<_>>>()?;
    let fit = loglog_slope(samples, &residuals)?;
    Ok(ExpansionFit { samples: samples.to_vec(), residuals, fit })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `0 < |ξ| ≤ r₁`; constants bound `−Re κ / |ξ|²`.
    Low { r1: f64 },
    /// `|ξ| ≥ r₂`; constants bound `−Re κ₊`.
    High { r2: f64 },
}

/// `β₀ ≥ β₁` with `−β₀·w ≤ Re κ ≤ −β₁·w` over the scanned samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub beta0: f64,
    pub beta1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub region: Region,
    pub compressible: BoundPair,
    pub shear: BoundPair,
    pub samples: usize,
    pub all_positive: bool,
}

fn widen(pair: &mut BoundPair, value: f64) {
    pair.beta0 = pair.beta0.max(value);
    pair.beta1 = pair.beta1.min(value);
}

/// Tightest decay constants for both blocks over the sampled frequencies.
pub fn spectral_bounds_scan(params: &PhysParams, region: Region, samples: &[f64]) -> Result<BoundsReport> {
    params.validate()?;
    match region {
        Region::Low { r1 } => check_samples(samples, |x| x > 0.0 && x <= r1, "low band")?,
        Region::High { r2 } => check_samples(samples, |x| x >= r2 && x.is_finite(), "high band")?,
    }
    let empty = BoundPair { beta0: f64::NEG_INFINITY, beta1: f64::INFINITY };
    let (mut comp, mut shear) = (empty, empty);
    for &x in samples {
        let ec = eigen_compressible(params, x)?;
        let es = eigen_shear(params, x)?;
        match region {
            Region::Low { .. } => {
                let w = x * x;
                for k in [ec.kappa_plus, ec.kappa_minus] {
                    widen(&mut comp, -k.re / w);
                }
                for k in [es.kappa_plus, es.kappa_minus] {
                    widen(&mut shear, -k.re / w);
                }
            }
            Region::High { .. } => {
                widen(&mut comp, -ec.kappa_plus.re);
                widen(&mut shear, -es.kappa_plus.re);
            }
        }
    }
    let all_positive = [comp.beta0, comp.beta1, shear.beta0, shear.beta1].iter().all(|b| *b > 0.0);
    Ok(BoundsReport { region, compressible: comp, shear, samples: samples.len(), all_positive })
}
