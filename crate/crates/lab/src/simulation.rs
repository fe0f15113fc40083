//! Driver that turns a [`RunConfig`] into a [`DecaySeries`].

use vdlab_core::cutoff::BandCutoffs;
use vdlab_core::PhysParams;

use crate::analysis::band_norms;
use crate::config::{RunConfig, RunMode};
use crate::error::{LabError, Result};
use crate::propagator::{evolve_linear, LinearPropagator, LinearScheme, LinearVariant, NonlinearScheme, NonlinearStepper};
use crate::series::{base_values, DecaySeries, BAND_COLUMNS, BASE_COLUMNS};
use crate::state::{make_initial_data, norms, StateU};

#[derive(Debug)]
pub struct RunOutput {
    pub series: DecaySeries,
    pub final_state: StateU,
}

/// A run that stopped early; `partial` holds every row recorded before the error.
#[derive(Debug)]
pub struct RunFailure {
    pub partial: DecaySeries,
    pub error: LabError,
}

impl From<LabError> for RunFailure {
    fn from(error: LabError) -> Self {
        RunFailure { partial: DecaySeries::default(), error }
    }
}

/// Empty series with the run's columns and metadata.
pub fn series_for(cfg: &RunConfig) -> DecaySeries {
    let mut names: Vec<&str> = BASE_COLUMNS.to_vec();
    if cfg.bands {
        names.extend(BAND_COLUMNS);
    }
    let mut s = DecaySeries::with_columns(&names);
    s.set_meta("box_half_width", cfg.box_l);
    s.set_meta("effective_radius", cfg.profile().effective_radius());
    s.set_meta("grid_n", cfg.grid_n);
    s.set_meta("mu", cfg.mu);
    s.set_meta("lambda", cfg.lambda);
    s.set_meta("gamma", cfg.gamma);
    s.set_meta("profile", format!("{:?}", cfg.profile).to_lowercase());
    s.set_meta("width", cfg.width);
    s.set_meta("amplitude", cfg.amplitude);
    s.set_meta("seed", cfg.seed);
    s.set_meta("mode", cfg.mode.as_str());
    if let Some(dt) = cfg.dt {
        s.set_meta("dt", dt);
        s.set_meta("integrator", format!("{:?}", cfg.integrator));
        s.set_meta("dealias", cfg.dealias);
    }
    if let Ok((r1, r2)) = cfg.bands() {
        s.set_meta("r1", r1);
        s.set_meta("r2", r2);
    }
    s.set_meta("q", cfg.q);
    s
}

fn record(series: &mut DecaySeries, u: &StateU, params: &PhysParams, cut: Option<&BandCutoffs>) -> Result<()> {
    let report = norms(u, params)?;
    let mut row = base_values(&report).to_vec();
    if let Some(cut) = cut {
        row.extend(band_norms(u, cut)?);
    }
    series.push(u.t, &row)
}

/// Run without per-output callbacks.
pub fn run_simulation(cfg: &RunConfig) -> std::result::Result<RunOutput, RunFailure> {
    run_simulation_with(cfg, |_, _| Ok(()))
}

/// Run and call `on_output(state, k)` after the `k`-th output row is recorded.
pub fn run_simulation_with(
    cfg: &RunConfig,
    mut on_output: impl FnMut(&StateU, usize) -> Result<()>,
) -> std::result::Result<RunOutput, RunFailure> {
    let times = cfg.validate()?;
    let params = cfg.params()?;
    let grid = cfg.grid()?;
    let (r1, r2) = cfg.bands()?;
    let cut = if cfg.bands { Some(BandCutoffs::new(r1, r2).map_err(LabError::from)?) } else { None };
    let mut u = make_initial_data(&grid, cfg.amplitude, cfg.profile(), cfg.seed)?;
    let mut series = series_for(cfg);

    let fail = |series: DecaySeries, error: LabError| RunFailure { partial: series, error };
    match cfg.mode {
        RunMode::LinearReduced | RunMode::LinearFull13 => {
            let variant = if cfg.mode == RunMode::LinearReduced { LinearVariant::Reduced } else { LinearVariant::Full13 };
            let scheme = LinearScheme::new(variant, r1, r2)?;
            for (k, &t) in times.iter().enumerate() {
                let step = t - u.t;
                let next = match variant {
                    LinearVariant::Reduced => LinearPropagator::new(&grid, &params, step).and_then(|p| {
                        let mut w = u.clone();
                        p.apply(&mut w)?;
                        Ok(w)
                    }),
                    LinearVariant::Full13 => evolve_linear(&u, step, &scheme, &params),
                };
                u = match next {
                    Ok(mut w) => {
                        w.t = t;
                        w
                    }
                    Err(e) => return Err(fail(series, e)),
                };
                if let Err(e) = record(&mut series, &u, &params, cut.as_ref()).and_then(|_| on_output(&u, k)) {
                    return Err(fail(series, e));
                }
            }
        }
        RunMode::Nonlinear => {
            let dt = cfg.dt.expect("validated");
            let scheme = NonlinearScheme::new(dt, cfg.dealias, cfg.integrator)?;
            let stepper = NonlinearStepper::new(&grid, scheme, params)?;
            let mut steps_done = 0usize;
            for (k, &t) in times.iter().enumerate() {
                let target = (t / dt).round() as usize;
                while steps_done < target {
                    u = match stepper.step(&u) {
                        Ok(mut w) => {
                            steps_done += 1;
                            w.t = steps_done as f64 * dt;
                            w
                        }
                        Err(e) => return Err(fail(series, e)),
                    };
                }
                if let Err(e) = record(&mut series, &u, &params, cut.as_ref()).and_then(|_| on_output(&u, k)) {
                    return Err(fail(series, e));
                }
            }
        }
    }
    Ok(RunOutput { series, final_state: u })
}
