//! Least-squares fits of decay laws.

use crate::error::{CoreError, Result};

pub const MIN_FIT_SAMPLES: usize = 5;

/// A straight-line fit `y = slope·x + intercept` in transformed coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub window: (f64, f64),
    pub r2: f64,
    pub samples: usize,
}

fn regress(x: &[f64], y: &[f64], window: (f64, f64)) -> SlopeFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| {
        let r = b - (slope * a + intercept);
        r * r
    }).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    let stderr = if x.len() > 2 { libm::sqrt(ss_res / ((n - 2.0) * sxx)) } else { f64::INFINITY };
    SlopeFit { slope, intercept, stderr, window, r2, samples: x.len() }
}

fn select(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<(alloc::vec::Vec<f64>, alloc::vec::Vec<f64>)> {
    if !(window.0 < window.1) {
        return Err(CoreError::InvalidParameter { name: "window", reason: "T0 must be below T1" });
    }
    let mut ts = alloc::vec::Vec::new();
    let mut vs = alloc::vec::Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t >= window.0 && t <= window.1 {
            if !(v > 0.0) {
                return Err(CoreError::NonPositiveValue { t, value: v });
            }
            ts.push(t);
            vs.push(v);
        }
    }
    if ts.len() < MIN_FIT_SAMPLES {
        return Err(CoreError::TooFewSamples { needed: MIN_FIT_SAMPLES, got: ts.len() });
    }
    Ok((ts, vs))
}

/// Fit `value ∝ t^slope` on `[T₀, T₁]` by regressing `ln value` on `ln t`.
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<SlopeFit> {
    if window.0 <= 0.0 {
        return Err(CoreError::InvalidParameter { name: "window", reason: "power-law fits need T0 > 0" });
    }
    let (ts, vs) = select(times, values, window)?;
    let x: alloc::vec::Vec<f64> = ts.iter().map(|t| libm::log(*t)).collect();
    let y: alloc::vec::Vec<f64> = vs.iter().map(|v| libm::log(*v)).collect();
    Ok(regress(&x, &y, window))
}

/// Fit `value ∝ e^{slope·t}` on `[T₀, T₁]`; the decay rate is `−slope`.
pub fn fit_exponential(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<SlopeFit> {
    let (ts, vs) = select(times, values, window)?;
    let y: alloc::vec::Vec<f64> = vs.iter().map(|v| libm::log(*v)).collect();
    Ok(regress(&ts, &y, window))
}

/// Log-log slope through arbitrary `(x, y)` pairs, no window.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<SlopeFit> {
    if x.is_empty() {
        return Err(CoreError::EmptySamples);
    }
    if x.len() < 2 {
        return Err(CoreError::TooFewSamples { needed: 2, got: x.len() });
    }
    for (&a, &b) in x.iter().zip(y) {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(CoreError::NonPositiveValue { t: a, value: b });
        }
    }
    let lx: alloc::vec::Vec<f64> = x.iter().map(|v| libm::log(*v)).collect();
    let ly: alloc::vec::Vec<f64> = y.iter().map(|v| libm::log(*v)).collect();
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(0.0, f64::max);
    Ok(regress(&lx, &ly, (lo, hi)))
}

/// `count` points spaced evenly in `ln` between `lo` and `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, count: usize) -> alloc::vec::Vec<f64> {
    match count {
        0 => alloc::vec::Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let (a, b) = (libm::log(lo), libm::log(hi));
            let mut out: alloc::vec::Vec<f64> =
                (0..count).map(|i| libm::exp(a + (b - a) * i as f64 / (count - 1) as f64)).collect();
            out[0] = lo;
            out[count - 1] = hi;
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn exact_power_law() {
        let t: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| libm::pow(*t, -0.75)).collect();
        let f = fit_power_law(&t, &v, (1.0, 40.0)).unwrap();
        assert!((f.slope + 0.75).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corrected_power_law() {
        let t = logspace(10.0, 100.0, 30);
        let v: Vec<f64> = t.iter().map(|t| 5.0 * libm::pow(*t, -0.75) * (1.0 + 1.0 / t)).collect();
        let f = fit_power_law(&t, &v, (10.0, 100.0)).unwrap();
        assert!(f.slope > -0.80 && f.slope < -0.70, "{}", f.slope);
    }

    #[test]
    fn exponential_rate() {
        let t: Vec<f64> = (0..30).map(|i| i as f64 * 0.5).collect();
        let v: Vec<f64> = t.iter().map(|t| 3.0 * libm::exp(-0.8 * t)).collect();
        let f = fit_exponential(&t, &v, (0.0, 20.0)).unwrap();
        assert!((f.slope + 0.8).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let t = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let v = [1.0, 0.5, 0.0, 0.2, 0.1, 0.05];
        assert!(matches!(fit_power_law(&t, &v, (1.0, 6.0)), Err(CoreError::NonPositiveValue { .. })));
        assert!(matches!(fit_power_law(&t, &[1.0; 6], (1.0, 3.0)), Err(CoreError::TooFewSamples { .. })));
        assert!(fit_power_law(&t, &[1.0; 6], (3.0, 1.0)).is_err());
    }
}
