//! Decay fits against the predicted exponents and the frequency-band split.

use serde::Serialize;
use vdlab_core::cutoff::BandCutoffs;
use vdlab_core::fit::{fit_exponential, fit_power_law, SlopeFit};
use vdlab_core::rates::{theoretical_exponent, wraparound_time, NormFamily};
use vdlab_core::C64;

use crate::error::{LabError, Result};
use crate::series::DecaySeries;
use crate::state::StateU;

pub const L2_TOLERANCE: f64 = 0.15;
pub const GRADIENT_TOLERANCE: f64 = 0.25;
pub const LINF_TOLERANCE: f64 = 0.25;
pub const HIGH_BAND_MIN_R2: f64 = 0.99;

/// Name of the derived `‖∂ₓU‖₂ + ‖∂ₜU‖₂` series.
pub const GRAD_DT: &str = "grad_dt";

/// Values of a named norm; `grad_dt` is assembled from `l2_grad + l2_dt`.
pub fn norm_values(series: &DecaySeries, norm: &str) -> Option<Vec<f64>> {
    if let Some(c) = series.column(norm) {
        return Some(c.to_vec());
    }
    if norm == GRAD_DT {
        let (g, d) = (series.column("l2_grad")?, series.column("l2_dt")?);
        return Some(g.iter().zip(d).map(|(a, b)| a + b).collect());
    }
    None
}

/// Least-squares slope of `ln value` against `ln t` on `[T₀, T₁]`.
pub fn fit_slope(series: &DecaySeries, norm: &str, window: (f64, f64)) -> Result<SlopeFit> {
    let values = norm_values(series, norm).ok_or_else(|| LabError::Input(format!("series has no column `{norm}`")))?;
    Ok(fit_power_law(&series.times, &values, window)?)
}

/// Wrap-around horizon recorded in the series metadata, if any.
pub fn series_wraparound(series: &DecaySeries) -> Option<f64> {
    let l = series.meta_f64("box_half_width")?;
    let r = series.meta_f64("effective_radius").unwrap_or(0.0);
    Some(wraparound_time(l, r))
}

/// `[5, min(50, 0.9·wraparound)]`, or `[5, 50]` without box metadata.
pub fn default_window(series: &DecaySeries) -> (f64, f64) {
    let end = series_wraparound(series).map_or(50.0, |w| (0.9 * w).min(50.0));
    (5.0, end)
}

pub fn tolerance_for(norm: &str) -> Result<f64> {
    Ok(match NormFamily::parse(norm)? {
        NormFamily::L2 => L2_TOLERANCE,
        NormFamily::Gradient => GRADIENT_TOLERANCE,
        NormFamily::SecondGradient | NormFamily::LInf => LINF_TOLERANCE,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub norm: String,
    pub theoretical: f64,
    pub fitted: Option<f64>,
    pub stderr: Option<f64>,
    pub r2: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub reliable: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateTable {
    pub q: f64,
    pub window: (f64, f64),
    pub wraparound_time: Option<f64>,
    pub rows: Vec<RateRow>,
    pub warnings: Vec<String>,
}

impl RateTable {
    pub fn all_pass(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q = {}, window = [{}, {}]\n", self.q, self.window.0, self.window.1);
        out.push_str(&format!("{:<14} {:>10} {:>10} {:>8} {:>6}\n", "norm", "expected", "fitted", "tol", "pass"));
        for r in &self.rows {
            let fitted = r.fitted.map_or("-".to_string(), |s| format!("{s:.4}"));
            out.push_str(&format!(
                "{:<14} {:>10.4} {:>10} {:>8.3} {:>6}\n",
                r.norm,
                r.theoretical,
                fitted,
                r.tolerance,
                if r.pass { "yes" } else { "no" }
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// One row per norm present in the series, checked against the exponent predicted for `q`.
pub fn rate_table(
    series: &DecaySeries,
    norms: &[(&str, f64)],
    q: f64,
    window: Option<(f64, f64)>,
) -> Result<RateTable> {
    let window = window.unwrap_or_else(|| default_window(series));
    let wrap = series_wraparound(series);
    let mut warnings = Vec::new();
    let reliable = match wrap {
        Some(w) if window.0 >= w => {
            warnings.push(format!(
                "fit window [{}, {}] lies past the wrap-around time {w:.3}; rows are unreliable",
                window.0, window.1
            ));
            false
        }
        Some(w) if window.1 > w => {
            warnings.push(format!("fit window ends after the wrap-around time {w:.3}"));
            true
        }
        _ => true,
    };
    let mut rows = Vec::new();
    for &(norm, tolerance) in norms {
        let theoretical = theoretical_exponent(norm, q)?;
        if norm_values(series, norm).is_none() {
            continue;
        }
        let row = match fit_slope(series, norm, window) {
            Ok(fit) => RateRow {
                norm: norm.to_string(),
                theoretical,
                fitted: Some(fit.slope),
                stderr: Some(fit.stderr),
                r2: Some(fit.r2),
                tolerance,
                pass: reliable && (fit.slope - theoretical).abs() <= tolerance,
                reliable,
                note: None,
            },
            Err(e) => RateRow {
                norm: norm.to_string(),
                theoretical,
                fitted: None,
                stderr: None,
                r2: None,
                tolerance,
                pass: false,
                reliable,
                note: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    Ok(RateTable { q, window, wraparound_time: wrap, rows, warnings })
}

/// Default rows: `l2_total`, `grad_dt`, `linf_total`.
pub fn default_norms() -> Vec<(&'static str, f64)> {
    vec![("l2_total", L2_TOLERANCE), (GRAD_DT, GRADIENT_TOLERANCE), ("linf_total", LINF_TOLERANCE)]
}

/// Multiply a spectral state by the band weights `[φ₀, φ_M, φ∞]`.
pub fn band_decompose(u: &StateU, r1: f64, r2: f64) -> Result<[StateU; 3]> {
    let cut = BandCutoffs::new(r1, r2)?;
    let s = u.to_spectral()?;
    let grid = s.grid;
    let comps = s.spectral().expect("spectral");
    let part = |b: usize| -> Result<StateU> {
        let c: Vec<Vec<C64>> =
            comps.iter().map(|f| grid.map_modes(f, |m| C64::new(cut.weights(m.magnitude)[b], 0.0))).collect();
        StateU::from_spectral(grid, s.t, c)
    };
    Ok([part(0)?, part(1)?, part(2)?])
}

/// `L₂` norms of the three band parts without materializing them.
pub fn band_norms(u: &StateU, cut: &BandCutoffs) -> Result<[f64; 3]> {
    let s = u.to_spectral()?;
    let grid = s.grid;
    let comps = s.spectral().expect("spectral");
    let mut out = [0.0; 3];
    for (b, o) in out.iter_mut().enumerate() {
        *o = grid
            .sum_modes(|m| {
                let w = cut.weights(m.magnitude)[b];
                if w == 0.0 {
                    return 0.0;
                }
                w * w * comps.iter().map(|c| c[m.index].norm_sqr()).sum::<f64>()
            })
            .sqrt();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandRow {
    pub band: String,
    pub kind: String,
    /// Power-law slope (low band) or log-linear slope (mid, high).
    pub slope: Option<f64>,
    /// `−slope` for the exponential fits.
    pub rate: Option<f64>,
    pub expected: Option<f64>,
    pub r2: Option<f64>,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandReport {
    pub q: f64,
    pub window: (f64, f64),
    pub rows: Vec<BandRow>,
}

impl BandReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass || r.note.as_deref().is_some_and(|n| n.starts_with("skipped")))
    }

    pub fn row(&self, band: &str) -> Option<&BandRow> {
        self.rows.iter().find(|r| r.band == band)
    }
}

fn empty_band(values: &[f64]) -> bool {
    values.iter().all(|v| *v == 0.0)
}

/// Low band fitted algebraically against `−σ(q)`, mid and high bands fitted log-linearly.
pub fn band_decay_report(series: &DecaySeries, q: f64, window: Option<(f64, f64)>) -> Result<BandReport> {
    let window = window.unwrap_or_else(|| default_window(series));
    let expected = theoretical_exponent("l2", q)?;
    let mut rows = Vec::new();
    for band in ["band_low", "band_mid", "band_high"] {
        let Some(values) = series.column(band) else {
            rows.push(BandRow {
                band: band.into(),
                kind: String::new(),
                slope: None,
                rate: None,
                expected: None,
                r2: None,
                pass: false,
                note: Some("skipped: column missing".into()),
            });
            continue;
        };
        let low = band == "band_low";
        let kind = if low { "power" } else { "exponential" }.to_string();
        if empty_band(values) {
            rows.push(BandRow {
                band: band.into(),
                kind,
                slope: None,
                rate: None,
                expected: None,
                r2: None,
                pass: false,
                note: Some("skipped: empty band".into()),
            });
            continue;
        }
        let fit = if low {
            fit_power_law(&series.times, values, window)
        } else {
            fit_exponential(&series.times, values, window)
        };
        let row = match fit {
            Ok(f) if low => BandRow {
                band: band.into(),
                kind,
                slope: Some(f.slope),
                rate: None,
                expected: Some(expected),
                r2: Some(f.r2),
                pass: (f.slope - expected).abs() <= L2_TOLERANCE,
                note: None,
            },
            Ok(f) => {
                let rate = -f.slope;
                let pass = rate > 0.0 && (band == "band_mid" || f.r2 >= HIGH_BAND_MIN_R2);
                BandRow {
                    band: band.into(),
                    kind,
                    slope: Some(f.slope),
                    rate: Some(rate),
                    expected: None,
                    r2: Some(f.r2),
                    pass,
                    note: None,
                }
            }
            Err(e) => BandRow {
                band: band.into(),
                kind,
                slope: None,
                rate: None,
                expected: None,
                r2: None,
                pass: false,
                note: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    Ok(BandReport { q, window, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::state::{make_initial_data, Profile};
    use vdlab_core::fit::logspace;

    fn synthetic(f: impl Fn(f64) -> f64) -> DecaySeries {
        let mut s = DecaySeries::with_columns(&["l2_total"]);
        for t in logspace(1.0, 100.0, 60) {
            s.push(t, &[f(t)]).unwrap();
        }
        s
    }

    #[test]
    fn exact_law_passes_and_wrong_law_fails() {
        let good = rate_table(&synthetic(|t| t.powf(-0.75)), &default_norms(), 1.0, None).unwrap();
        assert!(good.all_pass());
        assert!((good.rows[0].fitted.unwrap() + 0.75).abs() < 1e-10);
        let bad = rate_table(&synthetic(|t| t.powf(-0.5)), &default_norms(), 1.0, None).unwrap();
        assert!(!bad.all_pass());
        assert!((bad.rows[0].fitted.unwrap() + 0.5).abs() < 1e-10);
    }

    #[test]
    fn heat_kernel_control_approaches_three_quarters() {
        // ‖e^{tΔ}u₀‖₂ for a Gaussian of variance s² is ∝ (s² + 2t)^{−3/4}
        let s = synthetic(|t| (2.0 + 2.0 * t).powf(-0.75));
        let early = fit_slope(&s, "l2_total", (1.0, 5.0)).unwrap().slope;
        let late = fit_slope(&s, "l2_total", (20.0, 100.0)).unwrap().slope;
        assert!(late < early && (late + 0.75).abs() < 0.05);
    }

    #[test]
    fn window_past_wraparound_is_flagged() {
        let mut s = synthetic(|t| t.powf(-0.75));
        s.set_meta("box_half_width", 10.0);
        s.set_meta("effective_radius", 0.0);
        let table = rate_table(&s, &default_norms(), 1.0, Some((20.0, 90.0))).unwrap();
        assert!(!table.warnings.is_empty());
        assert!(table.rows.iter().all(|r| !r.reliable && !r.pass));
    }

    #[test]
    fn bands_partition_the_state() {
        let g = GridSpec::new(16, 8.0).unwrap();
        let u = make_initial_data(&g, 1.0, Profile::Gaussian { width: 1.0 }, 2).unwrap();
        let parts = band_decompose(&u, 0.7, 2.0).unwrap();
        let mut sum = parts[0].clone();
        sum.axpy(1.0, &parts[1]).unwrap();
        sum.axpy(1.0, &parts[2]).unwrap();
        assert!(sum.l2_distance(&u).unwrap() < 1e-12 * u.l2().unwrap());
        assert!(band_decompose(&u, 2.0, 1.0).is_err());
        let norms = band_norms(&u, &BandCutoffs::new(0.7, 2.0).unwrap()).unwrap();
        for (n, p) in norms.iter().zip(parts.iter()) {
            assert!((n - p.l2().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn band_report_on_exact_laws() {
        let mut s = DecaySeries::with_columns(&["band_low", "band_mid", "band_high"]);
        for t in logspace(1.0, 40.0, 40) {
            s.push(t, &[t.powf(-0.75), 0.0, (-0.9 * t).exp()]).unwrap();
        }
        let r = band_decay_report(&s, 1.0, Some((5.0, 30.0))).unwrap();
        assert!(r.all_pass());
        assert!((r.row("band_high").unwrap().rate.unwrap() - 0.9).abs() < 1e-10);
        assert!(r.row("band_mid").unwrap().note.as_deref().unwrap().starts_with("skipped"));
    }
}
