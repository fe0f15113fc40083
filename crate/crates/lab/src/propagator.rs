//! Time evolution: the exact linear semigroup (reduced and 13×13 paths), the
//! nonlinear right-hand side and two exponential integrators.

use rayon::prelude::*;
use vdlab_core::{exp_full, full_symbol, propagate_mode, ModeBlocks, PhysParams, C64, STATE_DIM};

use crate::error::{LabError, Result};
use crate::grid::GridSpec;
use crate::state::{check_density, StateU, COMPONENTS};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearVariant {
    /// Compressible and shear 2×2 blocks plus the kernel part (production path).
    Reduced,
    /// Padé exponential of the 13×13 symbol per mode (small-grid cross-check).
    Full13,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearScheme {
    pub variant: LinearVariant,
    pub r1: f64,
    pub r2: f64,
}

impl LinearScheme {
    pub fn new(variant: LinearVariant, r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1 < r2) {
            return Err(LabError::config("r1", format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
        }
        Ok(Self { variant, r1, r2 })
    }

    pub fn with_default_bands(variant: LinearVariant, params: &PhysParams) -> Self {
        Self { variant, r1: params.default_r1(), r2: params.default_r2() }
    }
}

/// Split 13 equal-length arrays into per-`z`-slab groups of mutable slices.
pub(crate) fn slabs_mut<T>(comps: &mut [Vec<T>], slab: usize) -> Vec<Vec<&mut [T]>> {
    let count = comps.first().map_or(0, |c| c.len() / slab);
    let mut iters: Vec<_> = comps.iter_mut().map(|c| c.chunks_mut(slab)).collect();
    (0..count).map(|_| iters.iter_mut().map(|it| it.next().expect("equal lengths")).collect()).collect()
}

/// Integer `|k|²` of the derivative wavevector (Nyquist components dropped).
fn k_squared(grid: &GridSpec, k: [i64; 3]) -> usize {
    let half = grid.n() as i64 / 2;
    k.iter().map(|&k| if k == -half { 0 } else { (k * k) as usize }).sum()
}

/// `e^{tÂ}` on one grid through the reduced path, with block data tabulated by `|k|²`.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    grid: GridSpec,
    t: f64,
    table: Vec<ModeBlocks>,
}

impl LinearPropagator {
    pub fn new(grid: &GridSpec, params: &PhysParams, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(vdlab_core::CoreError::NegativeTime(t).into());
        }
        params.validate()?;
        let max = 3 * (grid.n() / 2) * (grid.n() / 2);
        let dxi = grid.dxi();
        let table = (0..=max)
            .into_par_iter()
            .map(|k2| ModeBlocks::new(params, dxi * (k2 as f64).sqrt(), t))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { grid: *grid, t, table })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Advance a spectral state in place by `t`.
    pub fn apply(&self, u: &mut StateU) -> Result<()> {
        if u.grid != self.grid {
            return Err(LabError::Input("propagator built for a different grid".into()));
        }
        let grid = self.grid;
        let comps = u.spectral_mut().ok_or_else(|| LabError::Input("expected a spectral state".into()))?;
        slabs_mut(comps, grid.slab_len()).into_par_iter().enumerate().for_each(|(z, mut slab)| {
            for (off, m) in grid.slab_modes(z).enumerate() {
                let mut x: [C64; STATE_DIM] = std::array::from_fn(|c| slab[c][off]);
                propagate_mode(&self.table[k_squared(&grid, m.k)], &m.xi, &mut x);
                for (c, v) in x.iter().enumerate() {
                    slab[c][off] = *v;
                }
            }
        });
        u.t += self.t;
        Ok(())
    }
}

/// `U(t) = e^{tÂ}U₀`, returned in spectral form with time `U₀.t + t`.
pub fn evolve_linear(u0: &StateU, t: f64, scheme: &LinearScheme, params: &PhysParams) -> Result<StateU> {
    Ok(evolve_linear_batch(std::slice::from_ref(u0), t, scheme, params)?.remove(0))
}

/// [`evolve_linear`] for several states on one grid, sharing the per-mode work.
pub fn evolve_linear_batch(
    states: &[StateU],
    t: f64,
    scheme: &LinearScheme,
    params: &PhysParams,
) -> Result<Vec<StateU>> {
    if !(t >= 0.0) {
        return Err(vdlab_core::CoreError::NegativeTime(t).into());
    }
    let Some(first) = states.first() else { return Ok(Vec::new()) };
    let grid = first.grid;
    if states.iter().any(|s| s.grid != grid) {
        return Err(LabError::Input("states live on different grids".into()));
    }
    let mut out = states.iter().map(|s| s.to_spectral()).collect::<Result<Vec<_>>>()?;
    match scheme.variant {
        LinearVariant::Reduced => {
            let prop = LinearPropagator::new(&grid, params, t)?;
            for u in out.iter_mut() {
                prop.apply(u)?;
            }
        }
        LinearVariant::Full13 => {
            params.validate()?;
            let slab = grid.slab_len();
            let mut groups: Vec<Vec<Vec<&mut [C64]>>> = out
                .iter_mut()
                .map(|u| slabs_mut(u.spectral_mut().expect("spectral"), slab))
                .collect();
            let mut per_slab: Vec<Vec<Vec<&mut [C64]>>> = (0..grid.n()).map(|_| Vec::new()).collect();
            for g in groups.iter_mut() {
                for (z, s) in g.drain(..).enumerate() {
                    per_slab[z].push(s);
                }
            }
            per_slab.into_par_iter().enumerate().try_for_each(|(z, mut states)| -> Result<()> {
                for (off, m) in grid.slab_modes(z).enumerate() {
                    let e = exp_full(&full_symbol(params, m.xi), t)?;
                    for s in states.iter_mut() {
                        let x: [C64; STATE_DIM] = std::array::from_fn(|c| s[c][off]);
                        let y = vdlab_core::full::apply(&e, &x);
                        for (c, v) in y.iter().enumerate() {
                            s[c][off] = *v;
                        }
                    }
                }
                Ok(())
            })?;
            for u in out.iter_mut() {
                u.t += t;
            }
        }
    }
    Ok(out)
}

/// Residual norms of the derived compressible and shear systems at one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DerivedResidual {
    pub t: f64,
    /// `‖(div v)_t − (2μ+λ)Δ div v + 2Δn‖₂`
    pub compressible: f64,
    /// `‖ℒ_t − μΔℒ + Δ(Eᵀ − E)‖₂` with `ℒ = ∇v − (∇v)ᵀ`
    pub shear: f64,
}

/// Evaluate both derived systems at every interior snapshot with centred time
/// differences; snapshots must be equally spaced.
pub fn derived_system_residuals(snaps: &[StateU], params: &PhysParams) -> Result<Vec<DerivedResidual>> {
    if snaps.len() < 3 {
        return Err(LabError::Input(format!("need at least 3 snapshots, got {}", snaps.len())));
    }
    let grid = snaps[0].grid;
    let h = snaps[1].t - snaps[0].t;
    for w in snaps.windows(2) {
        let step = w[1].t - w[0].t;
        if !(h > 0.0) || (step - h).abs() > 1e-9 * h {
            return Err(LabError::Input("snapshots must be equally spaced in time".into()));
        }
        if w[1].grid != grid {
            return Err(LabError::Input("snapshots live on different grids".into()));
        }
    }
    let spec = snaps.iter().map(|s| s.to_spectral()).collect::<Result<Vec<_>>>()?;
    let nu = params.nu();
    let mut out = Vec::with_capacity(snaps.len() - 2);
    for i in 1..snaps.len() - 1 {
        let (a, b, c) = (
            spec[i - 1].spectral().expect("spectral"),
            spec[i].spectral().expect("spectral"),
            spec[i + 1].spectral().expect("spectral"),
        );
        let div = |s: &[Vec<C64>], m: &crate::grid::Mode| -> C64 {
            (0..3).map(|j| I * m.xi[j] * s[1 + j][m.index]).sum()
        };
        let curl = |s: &[Vec<C64>], m: &crate::grid::Mode, p: usize, q: usize| -> C64 {
            I * m.xi[q] * s[1 + p][m.index] - I * m.xi[p] * s[1 + q][m.index]
        };
        let comp = grid.sum_modes(|m| {
            let x2 = m.magnitude * m.magnitude;
            let dt = (div(c, m) - div(a, m)) / (2.0 * h);
            (dt + div(b, m) * (nu * x2) - b[0][m.index] * (2.0 * x2)).norm_sqr()
        });
        let shear = grid.sum_modes(|m| {
            let x2 = m.magnitude * m.magnitude;
            let mut acc = 0.0;
            for p in 0..3 {
                for q in 0..3 {
                    if p == q {
                        continue;
                    }
                    let dt = (curl(c, m, p, q) - curl(a, m, p, q)) / (2.0 * h);
                    let g = b[4 + 3 * q + p][m.index] - b[4 + 3 * p + q][m.index];
                    acc += (dt + curl(b, m, p, q) * (params.mu * x2) - g * x2).norm_sqr();
                }
            }
            acc
        });
        out.push(DerivedResidual { t: snaps[i].t, compressible: comp.sqrt(), shear: shear.sqrt() });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Half-step exponential predictor, Duhamel integral by the midpoint rule.
    EtdMidpoint,
    /// Full-step exponential predictor, Duhamel integral by the trapezoid rule.
    DuhamelTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearScheme {
    pub dt: f64,
    pub dealias: bool,
    pub integrator: Integrator,
}

impl NonlinearScheme {
    pub fn new(dt: f64, dealias: bool, integrator: Integrator) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(LabError::config("dt", format!("must be positive, got {dt}")));
        }
        Ok(Self { dt, dealias, integrator })
    }
}

fn dealias_in_place(grid: &GridSpec, comps: &mut [Vec<C64>]) {
    for c in comps.iter_mut() {
        c.par_chunks_mut(grid.slab_len()).enumerate().for_each(|(z, s)| {
            for (m, v) in grid.slab_modes(z).zip(s.iter_mut()) {
                if !grid.dealias_keep(m.k) {
                    *v = ZERO;
                }
            }
        });
    }
}

fn inverse_all(grid: &GridSpec, specs: Vec<Vec<C64>>) -> Result<Vec<Vec<f64>>> {
    specs.into_par_iter().map(|s| grid.inverse_owned(s)).collect()
}

/// `(f₁, f₂, f₃)` with `P(ρ) = ρ^γ/γ`, in spectral form:
///
/// ```text
/// f₁    = −n div v − v·∇n
/// f₂_i  = E_jk ∂_j E_ik − n/(1+n)(μΔv_i + (λ+μ)∂_i div v) − v·∇v_i − ((1+n)^{γ−2} − 1)∂_i n
/// f₃_ij = Σ_k ∂_k v_i E_kj − v·∇E_ij
/// ```
pub fn nonlinear_rhs(u: &StateU, params: &PhysParams, dealias: bool) -> Result<StateU> {
    let grid = u.grid;
    let mut s = u.to_spectral()?.spectral().expect("spectral").to_vec();
    if dealias {
        dealias_in_place(&grid, &mut s);
    }
    let (mu, lm, gamma) = (params.mu, params.lambda, params.gamma);
    let len = grid.points();

    let p = inverse_all(&grid, s.clone())?;
    check_density(u.t, &p[0])?;
    let n = &p[0];
    let v = [&p[1], &p[2], &p[3]];

    let mut specs = Vec::with_capacity(15);
    for j in 0..3 {
        specs.push(grid.derivative(&s[0], j));
    }
    for i in 0..3 {
        for k in 0..3 {
            specs.push(grid.derivative(&s[1 + i], k));
        }
    }
    for i in 0..3 {
        specs.push(grid.map_modes(&s[1 + i], |m| C64::new(-mu * m.magnitude * m.magnitude, 0.0)));
    }
    let lap_v: Vec<Vec<C64>> = specs.split_off(12);
    let mut visc = Vec::with_capacity(3);
    for (i, lap) in lap_v.iter().enumerate() {
        let mut div_grad = vec![ZERO; grid.modes()];
        for k in 0..3 {
            let dk = grid.map_modes(&s[1 + k], |m| C64::new(-(lm + mu) * m.xi[i] * m.xi[k], 0.0));
            div_grad.iter_mut().zip(&dk).for_each(|(a, b)| *a += b);
        }
        visc.push(lap.iter().zip(&div_grad).map(|(a, b)| a + b).collect::<Vec<_>>());
    }
    specs.extend(visc);
    let d = inverse_all(&grid, specs)?;
    let grad_n = &d[0..3];
    let grad_v = |i: usize, k: usize| &d[3 + 3 * i + k];
    let visc = &d[12..15];

    let mut f: Vec<Vec<f64>> = vec![vec![0.0; len]; COMPONENTS];
    {
        let (f1, rest) = f.split_at_mut(1);
        let f1 = &mut f1[0];
        for x in 0..len {
            let div = grad_v(0, 0)[x] + grad_v(1, 1)[x] + grad_v(2, 2)[x];
            f1[x] = -n[x] * div - (v[0][x] * grad_n[0][x] + v[1][x] * grad_n[1][x] + v[2][x] * grad_n[2][x]);
        }
        for i in 0..3 {
            let fi = &mut rest[i];
            for x in 0..len {
                let rho = 1.0 + n[x];
                let pressure = ((gamma - 2.0) * n[x].ln_1p()).exp_m1();
                let adv = v[0][x] * grad_v(i, 0)[x] + v[1][x] * grad_v(i, 1)[x] + v[2][x] * grad_v(i, 2)[x];
                fi[x] = -(n[x] / rho) * visc[i][x] - adv - pressure * grad_n[i][x];
            }
            for j in 0..3 {
                let fij = &mut rest[3 + 3 * i + j];
                for x in 0..len {
                    fij[x] = (0..3).map(|k| grad_v(i, k)[x] * p[4 + 3 * k + j][x]).sum();
                }
            }
        }
    }
    drop(d);
    // stream ∂_j E_ik for each (i, k)
    for i in 0..3 {
        for k in 0..3 {
            let e = 4 + 3 * i + k;
            let grads = inverse_all(&grid, (0..3).map(|j| grid.derivative(&s[e], j)).collect())?;
            let (head, tail) = f.split_at_mut(4);
            let f2 = &mut head[1 + i];
            let f3 = &mut tail[3 * i + k];
            for x in 0..len {
                let mut elastic = 0.0;
                let mut adv = 0.0;
                for (j, g) in grads.iter().enumerate() {
                    elastic += p[4 + 3 * j + k][x] * g[x];
                    adv += v[j][x] * g[x];
                }
                f2[x] += elastic;
                f3[x] -= adv;
            }
        }
    }
    let mut out = f.into_par_iter().map(|c| grid.forward(&c)).collect::<Result<Vec<_>>>()?;
    if dealias {
        dealias_in_place(&grid, &mut out);
    }
    StateU::from_spectral(grid, u.t, out)
}

/// Reusable half- and full-step propagators for a fixed `Δt`.
#[derive(Debug, Clone)]
pub struct NonlinearStepper {
    pub scheme: NonlinearScheme,
    pub params: PhysParams,
    half: LinearPropagator,
    full: LinearPropagator,
}

impl NonlinearStepper {
    pub fn new(grid: &GridSpec, scheme: NonlinearScheme, params: PhysParams) -> Result<Self> {
        NonlinearScheme::new(scheme.dt, scheme.dealias, scheme.integrator)?;
        Ok(Self {
            half: LinearPropagator::new(grid, &params, 0.5 * scheme.dt)?,
            full: LinearPropagator::new(grid, &params, scheme.dt)?,
            scheme,
            params,
        })
    }

    pub fn step(&self, u: &StateU) -> Result<StateU> {
        let (params, dealias) = (self.params, self.scheme.dealias);
        self.step_with(u, |w| nonlinear_rhs(w, &params, dealias))
    }

    /// One step with an arbitrary right-hand side `F`.
    pub fn step_with(&self, u: &StateU, rhs: impl Fn(&StateU) -> Result<StateU>) -> Result<StateU> {
        let dt = self.scheme.dt;
        let u = u.to_spectral()?;
        let f0 = rhs(&u)?;
        match self.scheme.integrator {
            Integrator::EtdMidpoint => {
                let mut y = u;
                self.half.apply(&mut y)?;
                let mut z = f0;
                self.half.apply(&mut z)?;
                let mut mid = y.clone();
                mid.axpy(0.5 * dt, &z)?;
                drop(z);
                let fm = rhs(&mid)?;
                drop(mid);
                y.axpy(dt, &fm)?;
                self.half.apply(&mut y)?;
                Ok(y)
            }
            Integrator::DuhamelTrapezoid => {
                let mut a = u;
                self.full.apply(&mut a)?;
                let mut b = f0;
                self.full.apply(&mut b)?;
                let mut pred = a.clone();
                pred.axpy(dt, &b)?;
                let fp = rhs(&pred)?;
                drop(pred);
                a.axpy(0.5 * dt, &b)?;
                a.axpy(0.5 * dt, &fp)?;
                Ok(a)
            }
        }
    }
}

/// One nonlinear step of length `scheme.dt`.
pub fn step_nonlinear(u: &StateU, scheme: &NonlinearScheme, params: &PhysParams) -> Result<StateU> {
    NonlinearStepper::new(&u.grid, *scheme, *params)?.step(u)
}

/// Per-mode right-hand side `ÂU` of the linear system, for diagnostics.
pub fn linear_rhs(u: &StateU, params: &PhysParams) -> Result<StateU> {
    let mut s = u.to_spectral()?;
    let grid = s.grid;
    let comps = s.spectral_mut().expect("spectral");
    slabs_mut(comps, grid.slab_len()).into_par_iter().enumerate().for_each(|(z, mut slab)| {
        for (off, m) in grid.slab_modes(z).enumerate() {
            let x: [C64; STATE_DIM] = std::array::from_fn(|c| slab[c][off]);
            let y = vdlab_core::apply_symbol(params, m.xi, &x);
            for (c, v) in y.iter().enumerate() {
                slab[c][off] = *v;
            }
        }
    });
    Ok(s)
}
