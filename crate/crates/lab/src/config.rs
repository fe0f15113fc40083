//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # linear decay run
//! mu = 1
//! lambda = 0
//! grid_n = 128
//! box_l = 60
//! mode = linear-reduced
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use vdlab_core::PhysParams;

use crate::error::{LabError, Result};
use crate::grid::GridSpec;
use crate::propagator::Integrator;
use crate::state::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    LinearReduced,
    LinearFull13,
    Nonlinear,
}

impl FromStr for RunMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" | "linear-reduced" | "reduced" => Ok(RunMode::LinearReduced),
            "linear-full13" | "full13" => Ok(RunMode::LinearFull13),
            "nonlinear" => Ok(RunMode::Nonlinear),
            _ => Err(format!("unknown mode `{s}` (linear-reduced, linear-full13, nonlinear)")),
        }
    }
}

impl RunMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunMode::LinearReduced => "linear-reduced",
            RunMode::LinearFull13 => "linear-full13",
            RunMode::Nonlinear => "nonlinear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Gaussian,
    RandomBandlimited,
}

impl FromStr for ProfileKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gaussian" => Ok(ProfileKind::Gaussian),
            "random" | "random_bandlimited" | "random-bandlimited" => Ok(ProfileKind::RandomBandlimited),
            _ => Err(format!("unknown profile `{s}` (gaussian, random_bandlimited)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

impl FromStr for Spacing {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "log" => Ok(Spacing::Log),
            "linear" => Ok(Spacing::Linear),
            _ => Err(format!("unknown spacing `{s}` (log, linear)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotPolicy {
    None,
    Final,
    All,
}

impl FromStr for SnapshotPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(SnapshotPolicy::None),
            "final" => Ok(SnapshotPolicy::Final),
            "all" => Ok(SnapshotPolicy::All),
            _ => Err(format!("unknown snapshot policy `{s}` (none, final, all)")),
        }
    }
}

fn parse_integrator(s: &str) -> std::result::Result<Integrator, String> {
    match s {
        "etd_midpoint" | "etd-midpoint" => Ok(Integrator::EtdMidpoint),
        "duhamel_trapezoid" | "duhamel-trapezoid" => Ok(Integrator::DuhamelTrapezoid),
        _ => Err(format!("unknown integrator `{s}` (etd_midpoint, duhamel_trapezoid)")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mu: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub grid_n: usize,
    pub box_l: f64,
    pub profile: ProfileKind,
    pub width: f64,
    pub amplitude: f64,
    pub seed: u64,
    pub mode: RunMode,
    pub t_start: f64,
    pub t_final: f64,
    pub outputs: usize,
    pub spacing: Spacing,
    pub dt: Option<f64>,
    pub integrator: Integrator,
    pub dealias: bool,
    pub bands: bool,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub q: f64,
    pub out: Option<PathBuf>,
    pub snapshots: SnapshotPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mu: 1.0,
            lambda: 0.0,
            gamma: 1.4,
            grid_n: 32,
            box_l: 16.0,
            profile: ProfileKind::Gaussian,
            width: 1.5,
            amplitude: 1e-3,
            seed: 1,
            mode: RunMode::LinearReduced,
            t_start: 1.0,
            t_final: 10.0,
            outputs: 10,
            spacing: Spacing::Log,
            dt: None,
            integrator: Integrator::EtdMidpoint,
            dealias: true,
            bands: true,
            r1: None,
            r2: None,
            q: 1.0,
            out: None,
            snapshots: SnapshotPolicy::Final,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse::<T>().map_err(|_| LabError::config(key, format!("cannot parse `{value}`")))
}

fn parse_with<T>(key: &str, value: &str, f: impl Fn(&str) -> std::result::Result<T, String>) -> Result<T> {
    f(value).map_err(|reason| LabError::config(key, reason))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(LabError::config(key, format!("expected a boolean, got `{value}`"))),
    }
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "mu" => self.mu = parse_value(key, value)?,
            "lambda" => self.lambda = parse_value(key, value)?,
            "gamma" => self.gamma = parse_value(key, value)?,
            "grid_n" => self.grid_n = parse_value(key, value)?,
            "box_l" => self.box_l = parse_value(key, value)?,
            "profile" => self.profile = parse_with(key, value, ProfileKind::from_str)?,
            "width" => self.width = parse_value(key, value)?,
            "amplitude" => self.amplitude = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "mode" => self.mode = parse_with(key, value, RunMode::from_str)?,
            "t_start" => self.t_start = parse_value(key, value)?,
            "t_final" => self.t_final = parse_value(key, value)?,
            "outputs" => self.outputs = parse_value(key, value)?,
            "spacing" => self.spacing = parse_with(key, value, Spacing::from_str)?,
            "dt" => self.dt = Some(parse_value(key, value)?),
            "integrator" => self.integrator = parse_with(key, value, parse_integrator)?,
            "dealias" => self.dealias = parse_bool(key, value)?,
            "bands" => self.bands = parse_bool(key, value)?,
            "r1" => self.r1 = Some(parse_value(key, value)?),
            "r2" => self.r2 = Some(parse_value(key, value)?),
            "q" => self.q = parse_value(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "snapshots" => self.snapshots = parse_with(key, value, SnapshotPolicy::from_str)?,
            _ => return Err(LabError::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Overlay settings from config-file text.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| LabError::Parse {
                line: i + 1,
                reason: format!("expected `key = value`, found `{line}`"),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Every setting in the file format; [`RunConfig::apply_text`] reads it back.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("mu = {:?}", self.mu),
            format!("lambda = {:?}", self.lambda),
            format!("gamma = {:?}", self.gamma),
            format!("grid_n = {}", self.grid_n),
            format!("box_l = {:?}", self.box_l),
            format!(
                "profile = {}",
                match self.profile {
                    ProfileKind::Gaussian => "gaussian",
                    ProfileKind::RandomBandlimited => "random_bandlimited",
                }
            ),
            format!("width = {:?}", self.width),
            format!("amplitude = {:?}", self.amplitude),
            format!("seed = {}", self.seed),
            format!("mode = {}", self.mode.as_str()),
            format!("t_start = {:?}", self.t_start),
            format!("t_final = {:?}", self.t_final),
            format!("outputs = {}", self.outputs),
            format!("spacing = {}", if self.spacing == Spacing::Log { "log" } else { "linear" }),
        ];
        if let Some(dt) = self.dt {
            lines.push(format!("dt = {dt:?}"));
        }
        lines.push(format!(
            "integrator = {}",
            match self.integrator {
                Integrator::EtdMidpoint => "etd_midpoint",
                Integrator::DuhamelTrapezoid => "duhamel_trapezoid",
            }
        ));
        lines.push(format!("dealias = {}", self.dealias));
        lines.push(format!("bands = {}", self.bands));
        if let Some(r1) = self.r1 {
            lines.push(format!("r1 = {r1:?}"));
        }
        if let Some(r2) = self.r2 {
            lines.push(format!("r2 = {r2:?}"));
        }
        lines.push(format!("q = {:?}", self.q));
        if let Some(out) = &self.out {
            lines.push(format!("out = {}", out.display()));
        }
        lines.push(format!(
            "snapshots = {}",
            match self.snapshots {
                SnapshotPolicy::None => "none",
                SnapshotPolicy::Final => "final",
                SnapshotPolicy::All => "all",
            }
        ));
        lines.join("\n") + "\n"
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.mu, self.lambda, self.gamma).map_err(|e| match e {
            vdlab_core::CoreError::InvalidParameter { name, reason } => LabError::config(name, reason),
            other => other.into(),
        })
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid_n, self.box_l)
    }

    pub fn profile(&self) -> Profile {
        match self.profile {
            ProfileKind::Gaussian => Profile::Gaussian { width: self.width },
            ProfileKind::RandomBandlimited => Profile::RandomBandlimited { width: self.width },
        }
    }

    pub fn bands(&self) -> Result<(f64, f64)> {
        let p = self.params()?;
        let (r1, r2) = (self.r1.unwrap_or(p.default_r1()), self.r2.unwrap_or(p.default_r2()));
        if !(r1 > 0.0 && r1 < r2) {
            return Err(LabError::config("r1", format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
        }
        Ok((r1, r2))
    }

    /// Check every field; returns the output times.
    pub fn validate(&self) -> Result<Vec<f64>> {
        self.params()?;
        self.grid()?;
        self.bands()?;
        if !(self.width > 0.0) {
            return Err(LabError::config("width", "must be positive"));
        }
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            return Err(LabError::config("amplitude", "must be nonnegative"));
        }
        if !(1.0..=2.0).contains(&self.q) {
            return Err(LabError::config("q", "must lie in [1, 2]"));
        }
        if self.outputs == 0 {
            return Err(LabError::config("outputs", "must be at least 1"));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(LabError::config("t_final", "must be positive"));
        }
        match (self.mode, self.dt) {
            (RunMode::Nonlinear, None) => return Err(LabError::config("dt", "required in nonlinear mode")),
            (RunMode::Nonlinear, Some(dt)) if !(dt > 0.0) => {
                return Err(LabError::config("dt", "must be positive"))
            }
            (RunMode::LinearReduced | RunMode::LinearFull13, Some(_)) => {
                return Err(LabError::config("dt", "only used in nonlinear mode"))
            }
            _ => {}
        }
        if self.mode == RunMode::Nonlinear {
            let dt = self.dt.expect("checked");
            let every = self.t_final / self.outputs as f64;
            let steps = every / dt;
            if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) || steps.round() < 1.0 {
                return Err(LabError::config(
                    "dt",
                    format!("output spacing {every} is not a whole number of steps of {dt}"),
                ));
            }
            return Ok((1..=self.outputs).map(|k| k as f64 * every).collect());
        }
        if !(self.t_start > 0.0 && self.t_start <= self.t_final) {
            return Err(LabError::config("t_start", "need 0 < t_start <= t_final"));
        }
        Ok(match (self.spacing, self.outputs) {
            (_, 1) => vec![self.t_final],
            (Spacing::Log, k) => vdlab_core::fit::logspace(self.t_start, self.t_final, k),
            (Spacing::Linear, k) => (0..k)
                .map(|i| self.t_start + (self.t_final - self.t_start) * i as f64 / (k - 1) as f64)
                .collect(),
        })
    }
}
