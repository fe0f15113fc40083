//! The `vdlab` command line.
//!
//! Exit codes: 0 success or pass, 1 check failed, 2 usage or configuration
//! error, 3 runtime state error (density lost positivity), 4 I/O or format error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vdlab_core::block::{eigen_compressible, eigen_shear, SymbolEigen};
use vdlab_core::expansion::{
    laurent_residual, spectral_bounds_scan, taylor_residual, BoundPair, BoundsReport, ExpansionFit, Region,
    LAURENT_MAX_ORDER, TAYLOR_MIN_ORDER,
};
use vdlab_core::fit::logspace;
use vdlab_core::{PhysParams, C64};

use crate::analysis::{band_decay_report, default_norms, rate_table, tolerance_for};
use crate::config::{RunConfig, SnapshotPolicy};
use crate::error::{LabError, Result};
use crate::grid::GridSpec;
use crate::helmholtz::{decompose, reconstruct};
use crate::plot::render_svg;
use crate::series::DecaySeries;
use crate::simulation::{run_simulation_with, RunFailure};
use crate::snapshot::{read_header, read_snapshot, write_snapshot, HEADER_LEN};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "vdlab", version, about = "Decay laboratory for the linearized and nonlinear viscoelastic system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the block eigenvalues over a range of |ξ|.
    SymbolScan(SymbolScanArgs),
    /// Fit the orders of the small- and large-|ξ| eigenvalue expansions.
    ExpansionCheck(ExpansionArgs),
    /// Run a simulation and write its norm series and snapshots.
    Propagate(PropagateArgs),
    /// Fit decay slopes of a series against the predicted exponents.
    DecayFit(FitArgs),
    /// Fit the low, mid and high frequency band norms of a series.
    BandReport(FitArgs),
    /// Check the Helmholtz split of random velocity fields.
    HelmholtzCheck(HelmholtzArgs),
    /// Draw a log-log chart of a series.
    Plot(PlotArgs),
    /// Print a snapshot header.
    SnapshotInfo(SnapshotInfoArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.4, allow_negative_numbers = true)]
    pub gamma: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<PhysParams> {
        RunConfig { mu: self.mu, lambda: self.lambda, gamma: self.gamma, ..RunConfig::default() }.params()
    }
}

#[derive(Debug, Args)]
pub struct SymbolScanArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub xi_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Sample spacing: log or linear.
    #[arg(long, default_value = "log")]
    pub spacing: String,
    /// CSV path; the bounds summary goes to `<out>.bounds.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExpansionArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    /// Minimum accepted order of the small-|ξ| remainder.
    #[arg(long, default_value_t = TAYLOR_MIN_ORDER)]
    pub taylor_min: f64,
    /// Maximum accepted order of the large-|ξ| remainder.
    #[arg(long, default_value_t = LAURENT_MAX_ORDER, allow_negative_numbers = true)]
    pub laurent_max: f64,
    /// JSON report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_n: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub box_l: Option<String>,
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub width: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub amplitude: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub seed: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_start: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_final: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub outputs: Option<String>,
    #[arg(long)]
    pub spacing: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<String>,
    #[arg(long)]
    pub integrator: Option<String>,
    #[arg(long)]
    pub dealias: Option<String>,
    #[arg(long)]
    pub bands: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub r1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub r2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<String>,
    #[arg(long)]
    pub snapshots: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
}

impl PropagateArgs {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 23] = [
            ("mu", &self.mu),
            ("lambda", &self.lambda),
            ("gamma", &self.gamma),
            ("grid_n", &self.grid_n),
            ("box_l", &self.box_l),
            ("profile", &self.profile),
            ("width", &self.width),
            ("amplitude", &self.amplitude),
            ("seed", &self.seed),
            ("mode", &self.mode),
            ("t_start", &self.t_start),
            ("t_final", &self.t_final),
            ("outputs", &self.outputs),
            ("spacing", &self.spacing),
            ("dt", &self.dt),
            ("integrator", &self.integrator),
            ("dealias", &self.dealias),
            ("bands", &self.bands),
            ("r1", &self.r1),
            ("r2", &self.r2),
            ("q", &self.q),
            ("snapshots", &self.snapshots),
            ("out", &self.out),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_text(&read_text(path)?)?;
        }
        for (k, v) in self.overrides() {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Series CSV written by `propagate`.
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Fit window `T0,T1`; defaults to `[5, min(50, 0.9·wrap-around)]`.
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(f64, f64)>,
    /// Comma-separated norms (decay-fit only).
    #[arg(long, value_delimiter = ',')]
    pub norms: Vec<String>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HelmholtzArgs {
    #[arg(long, default_value_t = 16)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 4.0)]
    pub box_l: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub series: PathBuf,
    /// Comma-separated norms; defaults to l2_total, grad_dt, linf_total.
    #[arg(long, value_delimiter = ',')]
    pub norms: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SnapshotInfoArgs {
    pub path: PathBuf,
    /// Decode the whole payload, not just the header.
    #[arg(long)]
    pub verify: bool,
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `T0,T1`")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    if !(a > 0.0 && a < b) {
        return Err("need 0 < T0 < T1".into());
    }
    Ok((a, b))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| LabError::io(path.display().to_string(), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| LabError::io(path.display().to_string(), e))
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable report") + "\n"
}

/// JSON numbers cannot carry infinities or NaN.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Run one parsed command and return its exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::SymbolScan(a) => symbol_scan(&a),
        Command::ExpansionCheck(a) => expansion_check(&a),
        Command::Propagate(a) => propagate(&a),
        Command::DecayFit(a) => decay_fit(&a),
        Command::BandReport(a) => band_report(&a),
        Command::HelmholtzCheck(a) => helmholtz_check(&a),
        Command::Plot(a) => plot(&a),
        Command::SnapshotInfo(a) => snapshot_info(&a),
    }
}

fn sample_grid(lo: f64, hi: f64, count: usize, spacing: &str) -> Result<Vec<f64>> {
    if count == 0 || !(lo > 0.0) || !(lo <= hi) || !hi.is_finite() || (count > 1 && lo == hi) {
        return Err(LabError::config("xi_min", format!("empty sample range [{lo}, {hi}] with {count} samples")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    match spacing {
        "log" => Ok(logspace(lo, hi, count)),
        "linear" => Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()),
        other => Err(LabError::config("spacing", format!("unknown spacing `{other}` (log, linear)"))),
    }
}

fn push_eigen(row: &mut String, e: &SymbolEigen) {
    for z in [e.kappa_plus, e.kappa_minus] {
        let _ = write!(row, ",{:.16e},{:.16e}", z.re, z.im);
    }
    let _ = write!(row, ",{}", u8::from(e.degenerate));
}

fn bounds_json(r: &BoundsReport) -> Value {
    let pair = |p: &BoundPair| json!({ "beta0": num(p.beta0), "beta1": num(p.beta1) });
    let (name, radius) = match r.region {
        Region::Low { r1 } => ("low", r1),
        Region::High { r2 } => ("high", r2),
    };
    json!({
        "region": name,
        "radius": radius,
        "samples": r.samples,
        "compressible": pair(&r.compressible),
        "shear": pair(&r.shear),
        "all_positive": r.all_positive,
    })
}

fn symbol_scan(a: &SymbolScanArgs) -> Result<i32> {
    let params = a.params.params()?;
    let xs = sample_grid(a.xi_min, a.xi_max, a.samples, &a.spacing)?;
    let mut csv = String::from(
        "xi,comp_re_plus,comp_im_plus,comp_re_minus,comp_im_minus,comp_degenerate,\
         shear_re_plus,shear_im_plus,shear_re_minus,shear_im_minus,shear_degenerate\n",
    );
    for &x in &xs {
        let mut row = format!("{x:.16e}");
        push_eigen(&mut row, &eigen_compressible(&params, x)?);
        push_eigen(&mut row, &eigen_shear(&params, x)?);
        csv.push_str(&row);
        csv.push('\n');
    }
    write_text(&a.out, &csv)?;

    let (r1, r2) = (params.default_r1(), params.default_r2());
    let low: Vec<f64> = xs.iter().copied().filter(|&x| x <= r1).collect();
    let high: Vec<f64> = xs.iter().copied().filter(|&x| x >= r2).collect();
    let mut regions = Vec::new();
    if !low.is_empty() {
        regions.push(bounds_json(&spectral_bounds_scan(&params, Region::Low { r1 }, &low)?));
    }
    if !high.is_empty() {
        regions.push(bounds_json(&spectral_bounds_scan(&params, Region::High { r2 }, &high)?));
    }
    let sidecar = json!({
        "mu": params.mu,
        "lambda": params.lambda,
        "r1": r1,
        "r2": r2,
        "regions": regions,
    });
    let mut path = a.out.clone().into_os_string();
    path.push(".bounds.json");
    write_text(Path::new(&path), &to_json(&sidecar))?;
    println!("wrote {} rows to {}", xs.len(), a.out.display());
    Ok(EXIT_OK)
}

fn fit_json(f: &ExpansionFit, threshold: f64, pass: bool) -> Value {
    json!({
        "order": f.order(),
        "stderr": f.fit.stderr,
        "r2": f.fit.r2,
        "samples": f.samples.len(),
        "range": [f.samples.first(), f.samples.last()],
        "threshold": threshold,
        "pass": pass,
    })
}

/// Small-|ξ| samples in `[1e-3, 1e-1]`, large-|ξ| samples in `[1e2, 1e4]`, each
/// kept clear of the degeneracy radius `2√2/ν`.
pub fn expansion_ranges(params: &PhysParams) -> ((f64, f64), (f64, f64)) {
    let degenerate = params.compressible_degenerate_xi().max(params.shear_degenerate_xi());
    let small = params.compressible_degenerate_xi().min(params.shear_degenerate_xi());
    let taylor_hi = 1e-1f64.min(0.1 * small);
    let laurent_lo = 1e2f64.max(10.0 * degenerate);
    ((1e-3f64.min(0.01 * taylor_hi), taylor_hi), (laurent_lo, 1e4f64.max(100.0 * laurent_lo)))
}

fn expansion_check(a: &ExpansionArgs) -> Result<i32> {
    let params = a.params.params()?;
    if a.samples < vdlab_core::fit::MIN_FIT_SAMPLES {
        return Err(LabError::config("samples", format!("need at least {}", vdlab_core::fit::MIN_FIT_SAMPLES)));
    }
    let ((t0, t1), (l0, l1)) = expansion_ranges(&params);
    let taylor = taylor_residual(&params, &logspace(t0, t1, a.samples))?;
    let laurent = laurent_residual(&params, &logspace(l0, l1, a.samples))?;
    let taylor_pass = taylor.order() >= a.taylor_min;
    let laurent_pass = laurent.order() <= a.laurent_max;
    let pass = taylor_pass && laurent_pass;
    let report = json!({
        "mu": params.mu,
        "lambda": params.lambda,
        "taylor": fit_json(&taylor, a.taylor_min, taylor_pass),
        "laurent": fit_json(&laurent, a.laurent_max, laurent_pass),
        "pass": pass,
    });
    match &a.out {
        Some(p) => {
            write_text(p, &to_json(&report))?;
            println!(
                "taylor order {:.4} ({}), laurent order {:.4} ({})",
                taylor.order(),
                if taylor_pass { "pass" } else { "fail" },
                laurent.order(),
                if laurent_pass { "pass" } else { "fail" }
            );
        }
        None => print!("{}", to_json(&report)),
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn propagate(a: &PropagateArgs) -> Result<i32> {
    let mut cfg = a.resolve()?;
    cfg.validate()?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("vdlab-run"));
    cfg.out = Some(out.clone());
    fs::create_dir_all(&out).map_err(|e| LabError::io(out.display().to_string(), e))?;
    write_text(&out.join("run.cfg"), &cfg.to_text())?;
    let params = cfg.params()?;
    let total = cfg.outputs;
    let policy = cfg.snapshots;
    let result = run_simulation_with(&cfg, |u, k| {
        let keep = match policy {
            SnapshotPolicy::None => false,
            SnapshotPolicy::Final => k + 1 == total,
            SnapshotPolicy::All => true,
        };
        if keep {
            write_snapshot(&out.join(format!("snapshot_{k:04}.vdl")), u, &params)?;
        }
        Ok(())
    });
    let csv_path = out.join("series.csv");
    match result {
        Ok(run) => {
            write_text(&csv_path, &run.series.to_csv())?;
            println!("wrote {} rows to {}", run.series.len(), csv_path.display());
            Ok(EXIT_OK)
        }
        Err(RunFailure { partial, error }) => {
            if !partial.columns.is_empty() {
                write_text(&csv_path, &partial.to_csv())?;
                eprintln!("partial series ({} rows) flushed to {}", partial.len(), csv_path.display());
            }
            Err(error)
        }
    }
}

fn load_series(path: &Path) -> Result<DecaySeries> {
    DecaySeries::from_csv(&read_text(path)?)
}

fn decay_fit(a: &FitArgs) -> Result<i32> {
    let series = load_series(&a.series)?;
    let norms: Vec<(&str, f64)> = if a.norms.is_empty() {
        default_norms()
    } else {
        a.norms.iter().map(|n| Ok((n.as_str(), tolerance_for(n)?))).collect::<Result<_>>()?
    };
    for (n, _) in &norms {
        if crate::analysis::norm_values(&series, n).is_none() {
            return Err(LabError::Input(format!("series has no column `{n}`")));
        }
    }
    let table = rate_table(&series, &norms, a.q, a.window)?;
    print!("{}", table.to_text());
    if let Some(p) = &a.out {
        write_text(p, &to_json(&table))?;
    }
    Ok(if table.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn band_report(a: &FitArgs) -> Result<i32> {
    let series = load_series(&a.series)?;
    let report = band_decay_report(&series, a.q, a.window)?;
    println!("q = {}, window = [{}, {}]", report.q, report.window.0, report.window.1);
    for r in &report.rows {
        let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "{:<10} {:<12} slope {:>9} rate {:>9} r2 {:>7} {}{}",
            r.band,
            r.kind,
            f(r.slope),
            f(r.rate),
            f(r.r2),
            if r.pass { "pass" } else { "fail" },
            r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    if let Some(p) = &a.out {
        write_text(p, &to_json(&report))?;
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn relative_gap(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.iter().zip(b) {
        for (p, q) in x.iter().zip(y) {
            num += (p - q).norm_sqr();
            den += p.norm_sqr();
        }
    }
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

fn helmholtz_check(a: &HelmholtzArgs) -> Result<i32> {
    let grid = GridSpec::new(a.grid_n, a.box_l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut field = || -> Result<Vec<C64>> {
        let f: Vec<f64> = (0..grid.points()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        grid.forward(&f)
    };
    let v: Vec<Vec<C64>> = (0..3).map(|_| field()).collect::<Result<_>>()?;
    let parts = decompose(&grid, [&v[0], &v[1], &v[2]])?;
    let back = reconstruct(&parts);
    let round_trip = relative_gap(&v, &back);

    let phi = field()?;
    let grad: Vec<Vec<C64>> = (0..3).map(|j| grid.derivative(&phi, j)).collect();
    let gp = decompose(&grid, [&grad[0], &grad[1], &grad[2]])?;
    let scale = gp.d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let gradient_shear = gp.omega.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / scale;

    let w: Vec<Vec<C64>> = (0..3).map(|_| field()).collect::<Result<_>>()?;
    let curl: Vec<Vec<C64>> = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let a = grid.derivative(&w[k], j);
            let b = grid.derivative(&w[j], k);
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        })
        .collect();
    let cp = decompose(&grid, [&curl[0], &curl[1], &curl[2]])?;
    let scale = cp.omega.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let curl_divergence = cp.d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / scale;

    let pass = round_trip <= a.tolerance && gradient_shear <= a.tolerance && curl_divergence <= a.tolerance;
    let report = json!({
        "grid_n": a.grid_n,
        "box_half_width": a.box_l,
        "seed": a.seed,
        "round_trip": round_trip,
        "gradient_shear": gradient_shear,
        "curl_divergence": curl_divergence,
        "tolerance": a.tolerance,
        "pass": pass,
    });
    match &a.out {
        Some(p) => write_text(p, &to_json(&report))?,
        None => print!("{}", to_json(&report)),
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn plot(a: &PlotArgs) -> Result<i32> {
    let series = load_series(&a.series)?;
    let defaults: Vec<String> = default_norms().into_iter().map(|(n, _)| n.to_string()).collect();
    let names = if a.norms.is_empty() { &defaults } else { &a.norms };
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    write_text(&a.out, &render_svg(&series, &names)?)?;
    println!("wrote {}", a.out.display());
    Ok(EXIT_OK)
}

fn snapshot_info(a: &SnapshotInfoArgs) -> Result<i32> {
    let (h, size) = read_header(&a.path)?;
    let expected = (HEADER_LEN + h.payload_len()) as u64;
    if size != expected {
        return Err(LabError::Format {
            offset: size.min(expected),
            reason: format!("file is {size} bytes, header implies {expected}"),
        });
    }
    if a.verify {
        read_snapshot(&a.path)?;
    }
    let info = json!({
        "version": h.version,
        "n": h.n,
        "box_half_width": h.box_half_width,
        "mu": h.params.mu,
        "lambda": h.params.lambda,
        "gamma": h.params.gamma,
        "t": h.t,
        "representation": format!("{:?}", h.representation).to_lowercase(),
        "components": h.components,
        "bytes": size,
    });
    print!("{}", to_json(&info));
    Ok(EXIT_OK)
}

/// Parse arguments, run, report errors on stderr; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
