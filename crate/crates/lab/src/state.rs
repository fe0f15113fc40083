//! The 13-component perturbation state `U = (n, v, E)`, its norms and
//! constraint residuals, and admissible initial data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use vdlab_core::{apply_symbol, e_index, v_index, PhysParams, C64, STATE_DIM};

use crate::error::{LabError, Result};
use crate::grid::GridSpec;

pub const COMPONENTS: usize = STATE_DIM;

pub const COMPONENT_NAMES: [&str; COMPONENTS] =
    ["n", "v1", "v2", "v3", "E11", "E12", "E13", "E21", "E22", "E23", "E31", "E32", "E33"];

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fields {
    Physical(Vec<Vec<f64>>),
    Spectral(Vec<Vec<C64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateU {
    pub grid: GridSpec,
    pub t: f64,
    pub fields: Fields,
}

impl StateU {
    pub fn zeros(grid: GridSpec, repr: Representation) -> Self {
        let fields = match repr {
            Representation::Physical => Fields::Physical(vec![vec![0.0; grid.points()]; COMPONENTS]),
            Representation::Spectral => Fields::Spectral(vec![vec![C64::new(0.0, 0.0); grid.modes()]; COMPONENTS]),
        };
        Self { grid, t: 0.0, fields }
    }

    pub fn from_physical(grid: GridSpec, t: f64, comps: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&comps, grid.points())?;
        Ok(Self { grid, t, fields: Fields::Physical(comps) })
    }

    pub fn from_spectral(grid: GridSpec, t: f64, comps: Vec<Vec<C64>>) -> Result<Self> {
        check_shape(&comps, grid.modes())?;
        Ok(Self { grid, t, fields: Fields::Spectral(comps) })
    }

    pub fn representation(&self) -> Representation {
        match self.fields {
            Fields::Physical(_) => Representation::Physical,
            Fields::Spectral(_) => Representation::Spectral,
        }
    }

    pub fn physical(&self) -> Option<&[Vec<f64>]> {
        match &self.fields {
            Fields::Physical(c) => Some(c),
            Fields::Spectral(_) => None,
        }
    }

    pub fn spectral(&self) -> Option<&[Vec<C64>]> {
        match &self.fields {
            Fields::Spectral(c) => Some(c),
            Fields::Physical(_) => None,
        }
    }

    pub fn spectral_mut(&mut self) -> Option<&mut [Vec<C64>]> {
        match &mut self.fields {
            Fields::Spectral(c) => Some(c),
            Fields::Physical(_) => None,
        }
    }

    pub fn physical_mut(&mut self) -> Option<&mut [Vec<f64>]> {
        match &mut self.fields {
            Fields::Physical(c) => Some(c),
            Fields::Spectral(_) => None,
        }
    }

    pub fn into_spectral(self) -> Result<Self> {
        match self.fields {
            Fields::Spectral(_) => Ok(self),
            Fields::Physical(comps) => {
                let grid = self.grid;
                let spec = comps.par_iter().map(|f| grid.forward(f)).collect::<Result<Vec<_>>>()?;
                Ok(Self { grid, t: self.t, fields: Fields::Spectral(spec) })
            }
        }
    }

    pub fn into_physical(self) -> Result<Self> {
        match self.fields {
            Fields::Physical(_) => Ok(self),
            Fields::Spectral(comps) => {
                let grid = self.grid;
                let phys = comps.into_par_iter().map(|s| grid.inverse_owned(s)).collect::<Result<Vec<_>>>()?;
                Ok(Self { grid, t: self.t, fields: Fields::Physical(phys) })
            }
        }
    }

    pub fn to_spectral(&self) -> Result<Self> {
        match &self.fields {
            Fields::Spectral(_) => Ok(self.clone()),
            Fields::Physical(comps) => {
                let spec = comps.par_iter().map(|f| self.grid.forward(f)).collect::<Result<Vec<_>>>()?;
                Ok(Self { grid: self.grid, t: self.t, fields: Fields::Spectral(spec) })
            }
        }
    }

    pub fn to_physical(&self) -> Result<Self> {
        match &self.fields {
            Fields::Physical(_) => Ok(self.clone()),
            Fields::Spectral(comps) => {
                let phys = comps.par_iter().map(|s| self.grid.inverse(s)).collect::<Result<Vec<_>>>()?;
                Ok(Self { grid: self.grid, t: self.t, fields: Fields::Physical(phys) })
            }
        }
    }

    /// `self ← self + a·other`; both states must share grid and representation.
    pub fn axpy(&mut self, a: f64, other: &StateU) -> Result<()> {
        if self.grid != other.grid {
            return Err(LabError::Input("states live on different grids".into()));
        }
        match (&mut self.fields, &other.fields) {
            (Fields::Spectral(x), Fields::Spectral(y)) => x.par_iter_mut().zip(y.par_iter()).for_each(|(x, y)| {
                x.iter_mut().zip(y).for_each(|(x, y)| *x += y * a);
            }),
            (Fields::Physical(x), Fields::Physical(y)) => x.par_iter_mut().zip(y.par_iter()).for_each(|(x, y)| {
                x.iter_mut().zip(y).for_each(|(x, y)| *x += a * y);
            }),
            _ => return Err(LabError::Input("states have different representations".into())),
        }
        Ok(())
    }

    pub fn scale(&mut self, a: f64) {
        match &mut self.fields {
            Fields::Spectral(x) => x.par_iter_mut().for_each(|x| x.iter_mut().for_each(|x| *x *= a)),
            Fields::Physical(x) => x.par_iter_mut().for_each(|x| x.iter_mut().for_each(|x| *x *= a)),
        }
    }

    /// Discrete `L₂` norm of all 13 components.
    pub fn l2(&self) -> Result<f64> {
        let s = self.to_spectral()?;
        let comps = s.spectral().expect("spectral");
        Ok(comps.iter().map(|c| self.grid.norm_sq(c)).sum::<f64>().sqrt())
    }

    /// `‖self − other‖₂`.
    pub fn l2_distance(&self, other: &StateU) -> Result<f64> {
        let mut d = self.to_spectral()?;
        d.axpy(-1.0, &other.to_spectral()?)?;
        d.l2()
    }
}

fn check_shape<T>(comps: &[Vec<T>], len: usize) -> Result<()> {
    if comps.len() != COMPONENTS {
        return Err(LabError::Dimension { expected: COMPONENTS, got: comps.len() });
    }
    for c in comps {
        if c.len() != len {
            return Err(LabError::Dimension { expected: len, got: c.len() });
        }
    }
    Ok(())
}

/// Gather the 13 components of one mode.
#[inline]
pub(crate) fn gather(comps: &[Vec<C64>], index: usize) -> [C64; COMPONENTS] {
    std::array::from_fn(|c| comps[c][index])
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NormReport {
    pub t: f64,
    pub l2_total: f64,
    pub l2_n: f64,
    pub l2_v: f64,
    #[serde(rename = "l2_E")]
    pub l2_e: f64,
    /// `‖∂ₓU‖₂`
    pub l2_grad: f64,
    /// `‖ÂU‖₂`, the linear part of `‖∂ₜU‖₂`
    pub l2_dt: f64,
    pub linf_total: f64,
    pub h1_v: f64,
    pub l1_total: f64,
    pub constraint_linear: f64,
    pub constraint_nonlinear: f64,
    pub curl_residual: f64,
}

/// Spectrum of the 3-vector `∂_j n + Σ_k ∂_k E_kj`.
pub fn constraint_residual_linear(u: &StateU) -> Result<[Vec<C64>; 3]> {
    let s = u.to_spectral()?;
    let comps = s.spectral().expect("spectral");
    let grid = u.grid;
    let mut out: [Vec<C64>; 3] = std::array::from_fn(|_| vec![C64::new(0.0, 0.0); grid.modes()]);
    for (j, r) in out.iter_mut().enumerate() {
        for z in 0..grid.n() {
            for m in grid.slab_modes(z) {
                let i = m.index;
                let mut acc = I * m.xi[j] * comps[0][i];
                for k in 0..3 {
                    acc += I * m.xi[k] * comps[e_index(k, j)][i];
                }
                r[i] = acc;
            }
        }
    }
    Ok(out)
}

fn linear_residual_sq(grid: &GridSpec, comps: &[Vec<C64>]) -> f64 {
    grid.sum_modes(|m| {
        let i = m.index;
        (0..3)
            .map(|j| {
                let mut acc = I * m.xi[j] * comps[0][i];
                for k in 0..3 {
                    acc += I * m.xi[k] * comps[e_index(k, j)][i];
                }
                acc.norm_sqr()
            })
            .sum()
    })
}

fn curl_residual_sq(grid: &GridSpec, comps: &[Vec<C64>]) -> f64 {
    grid.sum_modes(|m| {
        let i = m.index;
        let mut acc = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let r = comps[e_index(j, k)][i] * m.xi[l] - comps[e_index(j, l)][i] * m.xi[k];
                    acc += r.norm_sqr();
                }
            }
        }
        acc
    })
}

/// `L₂` norm of `∂_l E_jk − ∂_k E_jl` over all `(j, k, l)`.
pub fn curl_residual(u: &StateU) -> Result<f64> {
    let s = u.to_spectral()?;
    Ok(curl_residual_sq(&u.grid, s.spectral().expect("spectral")).sqrt())
}

/// `L₂` norm of `∇n + div Eᵀ` (component `j` is `∂_j n + Σ_k ∂_k E_kj`).
pub fn constraint_linear_norm(u: &StateU) -> Result<f64> {
    let s = u.to_spectral()?;
    Ok(linear_residual_sq(&u.grid, s.spectral().expect("spectral")).sqrt())
}

pub(crate) fn check_density(t: f64, n: &[f64]) -> Result<()> {
    match n.iter().position(|v| !(1.0 + v > 0.0)) {
        Some(index) => Err(LabError::Density { t, index, value: 1.0 + n[index] }),
        None => Ok(()),
    }
}

/// `L₂` norm of `div((1+n)(I+E)ᵀ)`, component `j = Σ_k ∂_k[(1+n)(δ_kj + E_kj)]`.
pub fn constraint_residual_nonlinear(u: &StateU) -> Result<f64> {
    let spec = u.to_spectral()?;
    let phys = u.to_physical()?;
    nonlinear_residual(&spec, &phys)
}

fn nonlinear_residual(spec: &StateU, phys: &StateU) -> Result<f64> {
    let grid = spec.grid;
    let s = spec.spectral().expect("spectral");
    let p = phys.physical().expect("physical");
    check_density(spec.t, &p[0])?;
    let products = (0..9)
        .into_par_iter()
        .map(|c| {
            let field: Vec<f64> = p[0].iter().zip(&p[4 + c]).map(|(n, e)| n * e).collect();
            grid.forward(&field)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(grid
        .sum_modes(|m| {
            let i = m.index;
            (0..3)
                .map(|j| {
                    let mut acc = I * m.xi[j] * s[0][i];
                    for k in 0..3 {
                        acc += I * m.xi[k] * (s[e_index(k, j)][i] + products[3 * k + j][i]);
                    }
                    acc.norm_sqr()
                })
                .sum()
        })
        .sqrt())
}

/// All entries of [`NormReport`].
pub fn norms(u: &StateU, params: &PhysParams) -> Result<NormReport> {
    let spec = u.to_spectral()?;
    let phys = u.to_physical()?;
    norms_with(&spec, &phys, params)
}

/// [`norms`] when both representations are already at hand.
pub fn norms_with(spec: &StateU, phys: &StateU, params: &PhysParams) -> Result<NormReport> {
    let grid = spec.grid;
    let s = spec
        .spectral()
        .ok_or_else(|| LabError::Input("expected a spectral state".into()))?;
    let p = phys
        .physical()
        .ok_or_else(|| LabError::Input("expected a physical state".into()))?;
    let sq: Vec<f64> = s.par_iter().map(|c| grid.norm_sq(c)).collect();
    let l2_n = sq[0];
    let l2_v: f64 = sq[1..4].iter().sum();
    let l2_e: f64 = sq[4..].iter().sum();
    let grad = grid.sum_modes(|m| {
        let x2 = m.magnitude * m.magnitude;
        x2 * (0..COMPONENTS).map(|c| s[c][m.index].norm_sqr()).sum::<f64>()
    });
    let grad_v = grid.sum_modes(|m| {
        let x2 = m.magnitude * m.magnitude;
        x2 * (1..4).map(|c| s[c][m.index].norm_sqr()).sum::<f64>()
    });
    let dt = grid.sum_modes(|m| {
        let au = apply_symbol(params, m.xi, &gather(s, m.index));
        au.iter().map(|z| z.norm_sqr()).sum()
    });
    let (linf, l1) = pointwise(p, grid.cell_volume());
    let constraint_nonlinear = match nonlinear_residual(spec, phys) {
        Ok(r) => r,
        Err(LabError::Density { .. }) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(NormReport {
        t: spec.t,
        l2_total: (l2_n + l2_v + l2_e).sqrt(),
        l2_n: l2_n.sqrt(),
        l2_v: l2_v.sqrt(),
        l2_e: l2_e.sqrt(),
        l2_grad: grad.sqrt(),
        l2_dt: dt.sqrt(),
        linf_total: linf,
        h1_v: (l2_v + grad_v).sqrt(),
        l1_total: l1,
        constraint_linear: linear_residual_sq(&grid, s).sqrt(),
        constraint_nonlinear,
        curl_residual: curl_residual_sq(&grid, s).sqrt(),
    })
}

/// Max and `h³`-weighted sum of the pointwise Euclidean norm of the 13-vector.
fn pointwise(p: &[Vec<f64>], cell: f64) -> (f64, f64) {
    let len = p[0].len();
    let chunk = 4096;
    let parts: Vec<(f64, f64)> = (0..len.div_ceil(chunk))
        .into_par_iter()
        .map(|b| {
            let (lo, hi) = (b * chunk, ((b + 1) * chunk).min(len));
            let mut mx = 0.0f64;
            let mut sum = 0.0;
            for i in lo..hi {
                let r = p.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt();
                mx = mx.max(r);
                sum += r;
            }
            (mx, sum)
        })
        .collect();
    let mx = parts.iter().fold(0.0f64, |a, b| a.max(b.0));
    let sum: f64 = parts.iter().map(|b| b.1).sum();
    (mx, sum * cell)
}

/// Shape of the vector potential `ψ` and the free velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `ψ_i = a_i exp(−|x|²/2s²)`, `v = b G + curl(c G)`, with `a`, `b`, `c` drawn from the seed.
    Gaussian { width: f64 },
    /// White noise under a Gaussian window of radius `3·width`, low-pass filtered at scale `width`.
    RandomBandlimited { width: f64 },
}

impl Profile {
    pub fn width(&self) -> f64 {
        match self {
            Profile::Gaussian { width } | Profile::RandomBandlimited { width } => *width,
        }
    }

    /// Radius containing essentially all of the initial data.
    pub fn effective_radius(&self) -> f64 {
        3.0 * self.width()
    }
}

/// `sqrt(Σ (1+|ξ|²)² |Û|²)`.
pub fn h2_norm(u: &StateU) -> Result<f64> {
    let s = u.to_spectral()?;
    let comps = s.spectral().expect("spectral");
    Ok(u
        .grid
        .sum_modes(|m| {
            let w = 1.0 + m.magnitude * m.magnitude;
            w * w * (0..COMPONENTS).map(|c| comps[c][m.index].norm_sqr()).sum::<f64>()
        })
        .sqrt())
}

fn unit_triple(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-3);
    v.map(|x| x / r)
}

/// Admissible data: `E = ∇ψ` (`E_jk = ∂_kψ_j`), `n = −div ψ`, and a
/// mean-zero velocity, scaled so that `‖U‖_{H²} = amplitude`. Spectral.
pub fn make_initial_data(grid: &GridSpec, amplitude: f64, profile: Profile, seed: u64) -> Result<StateU> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(LabError::config("amplitude", format!("must be nonnegative, got {amplitude}")));
    }
    let width = profile.width();
    if !(width > 0.0) || !width.is_finite() {
        return Err(LabError::config("width", format!("must be positive, got {width}")));
    }
    let mut state = StateU::zeros(*grid, Representation::Spectral);
    if amplitude == 0.0 {
        return Ok(state);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let window = |x: usize, y: usize, z: usize, s: f64| {
        let r2 = grid.coordinate(x).powi(2) + grid.coordinate(y).powi(2) + grid.coordinate(z).powi(2);
        (-r2 / (2.0 * s * s)).exp()
    };
    // six potentials: ψ₁..ψ₃ then the velocity sources
    let sources: Vec<Vec<C64>> = match profile {
        Profile::Gaussian { width } => {
            let mut g = Vec::with_capacity(grid.points());
            for z in 0..n {
                for y in 0..n {
                    for x in 0..n {
                        g.push(window(x, y, z, width));
                    }
                }
            }
            let gh = grid.forward(&g)?;
            let coeffs = [unit_triple(&mut rng), unit_triple(&mut rng), unit_triple(&mut rng)];
            let mut out = Vec::with_capacity(9);
            for set in coeffs {
                for a in set {
                    out.push(gh.iter().map(|z| z * a).collect());
                }
            }
            out
        }
        Profile::RandomBandlimited { width } => {
            let mut out = Vec::with_capacity(9);
            for _ in 0..9 {
                let mut f = Vec::with_capacity(grid.points());
                for z in 0..n {
                    for y in 0..n {
                        for x in 0..n {
                            f.push(rng.gen_range(-1.0..1.0) * window(x, y, z, 3.0 * width));
                        }
                    }
                }
                let fh = grid.forward(&f)?;
                out.push(grid.map_modes(&fh, |m| C64::new((-0.5 * (m.magnitude * width).powi(2)).exp(), 0.0)));
            }
            out
        }
    };
    let comps = state.spectral_mut().expect("spectral");
    for z in 0..n {
        for m in grid.slab_modes(z) {
            let i = m.index;
            let psi = [sources[0][i], sources[1][i], sources[2][i]];
            let b = [sources[3][i], sources[4][i], sources[5][i]];
            let c = [sources[6][i], sources[7][i], sources[8][i]];
            let xi = m.xi;
            comps[0][i] = -I * (xi[0] * psi[0] + xi[1] * psi[1] + xi[2] * psi[2]);
            for j in 0..3 {
                for k in 0..3 {
                    comps[e_index(j, k)][i] = I * xi[k] * psi[j];
                }
            }
            if m.k != [0, 0, 0] {
                let curl = [
                    I * (xi[1] * c[2] - xi[2] * c[1]),
                    I * (xi[2] * c[0] - xi[0] * c[2]),
                    I * (xi[0] * c[1] - xi[1] * c[0]),
                ];
                for j in 0..3 {
                    comps[v_index(j)][i] = b[j] + curl[j];
                }
            }
        }
    }
    let h2 = h2_norm(&state)?;
    if h2 > 0.0 {
        state.scale(amplitude / h2);
    }
    Ok(state)
}
