//! Periodic grid on `[−L, L)³`, its wavenumber lattice and the transform pair.
//!
//! Physical fields hold `n³` reals with `x` fastest. Spectra hold the
//! non-redundant half `(n/2+1)·n·n` of the real-to-complex transform, again
//! `x` fastest, and are scaled so that
//! `Σ_ξ |û(ξ)|² = h³ Σ_x |u(x)|²` (the full-lattice sum, with the implied
//! conjugate modes counted), i.e. the discrete `L₂` norm is the same on
//! both sides.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};
use vdlab_core::C64;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub xi: [f64; 3],
}

impl WaveVector {
    pub fn magnitude(&self) -> f64 {
        (self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1] + self.xi[2] * self.xi[2]).sqrt()
    }
}

/// One entry of the half spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Flat index into a spectral array.
    pub index: usize,
    /// Signed integer frequency; Nyquist components are `−n/2`.
    pub k: [i64; 3],
    /// Wavevector used by derivatives and symbols (Nyquist components zeroed).
    pub xi: [f64; 3],
    /// `|xi|`.
    pub magnitude: f64,
    /// Multiplicity in full-lattice sums (1 or 2).
    pub weight: f64,
}

impl GridSpec {
    pub fn new(n: usize, box_half_width: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(LabError::config("grid_n", format!("must be even and at least 8, got {n}")));
        }
        if !(box_half_width > 0.0) || !box_half_width.is_finite() {
            return Err(LabError::config("box_l", format!("must be positive, got {box_half_width}")));
        }
        Ok(Self { n, l: box_half_width })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_half_width(&self) -> f64 {
        self.l
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn volume(&self) -> f64 {
        (2.0 * self.l).powi(3)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn points(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Length of the stored `x` axis in spectral arrays.
    pub fn half(&self) -> usize {
        self.n / 2 + 1
    }

    pub fn modes(&self) -> usize {
        self.half() * self.n * self.n
    }

    /// `π/L`, the lattice spacing in `ξ`.
    pub fn dxi(&self) -> f64 {
        PI / self.l
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.spacing()
    }

    pub fn signed(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    fn is_nyquist(&self, k: i64) -> bool {
        k == -(self.n as i64) / 2
    }

    /// `ξ = (π/L)k` for a full-lattice index triple.
    pub fn wavenumber(&self, index: [usize; 3]) -> Result<WaveVector> {
        if let Some(i) = index.iter().find(|i| **i >= self.n) {
            return Err(LabError::Input(format!("index component {i} outside [0, {})", self.n)));
        }
        let s = self.dxi();
        Ok(WaveVector { xi: index.map(|i| s * self.signed(i) as f64) })
    }

    /// Derivative wavenumber for a signed frequency.
    pub fn deriv_xi(&self, k: i64) -> f64 {
        if self.is_nyquist(k) {
            0.0
        } else {
            self.dxi() * k as f64
        }
    }

    pub fn mode_at(&self, x: usize, y: usize, z: usize) -> Mode {
        let half = self.half();
        let k = [self.signed(x), self.signed(y), self.signed(z)];
        let xi = k.map(|k| self.deriv_xi(k));
        let weight = if x == 0 || x == half - 1 { 1.0 } else { 2.0 };
        Mode {
            index: x + half * (y + self.n * z),
            k,
            xi,
            magnitude: (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt(),
            weight,
        }
    }

    /// All stored modes of one `z`-slab, in storage order.
    pub fn slab_modes(&self, z: usize) -> impl Iterator<Item = Mode> + '_ {
        let half = self.half();
        (0..self.n).flat_map(move |y| (0..half).map(move |x| self.mode_at(x, y, z)))
    }

    pub fn slab_len(&self) -> usize {
        self.half() * self.n
    }

    /// Two-thirds rule: keep modes with `3|k_j| < n` in every direction.
    pub fn dealias_keep(&self, k: [i64; 3]) -> bool {
        k.iter().all(|k| 3 * k.unsigned_abs() < self.n as u64)
    }

    /// `Σ |û|²` over the full lattice.
    pub fn norm_sq(&self, spec: &[C64]) -> f64 {
        let half = self.half();
        spec.par_chunks(half)
            .map(|row| {
                let edge = row[0].norm_sqr() + row[half - 1].norm_sqr();
                let inner: f64 = row[1..half - 1].iter().map(|z| z.norm_sqr()).sum();
                edge + 2.0 * inner
            })
            .collect::<Vec<_>>()
            .iter()
            .sum()
    }

    /// Physical-space `Σ h³ |u|²`.
    pub fn physical_norm_sq(&self, field: &[f64]) -> f64 {
        field.iter().map(|v| v * v).sum::<f64>() * self.cell_volume()
    }

    /// New spectrum `f(mode)·û(mode)`.
    pub fn map_modes(&self, spec: &[C64], f: impl Fn(&Mode) -> C64 + Sync) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); spec.len()];
        let slab = self.slab_len();
        out.par_chunks_mut(slab).zip(spec.par_chunks(slab)).enumerate().for_each(|(z, (o, s))| {
            for (m, (o, s)) in self.slab_modes(z).zip(o.iter_mut().zip(s)) {
                *o = f(&m) * s;
            }
        });
        out
    }

    /// `Σ weight·g(mode)` over the full lattice.
    pub fn sum_modes(&self, g: impl Fn(&Mode) -> f64 + Sync) -> f64 {
        (0..self.n)
            .into_par_iter()
            .map(|z| self.slab_modes(z).map(|m| m.weight * g(&m)).sum::<f64>())
            .collect::<Vec<_>>()
            .iter()
            .sum()
    }

    /// Spectrum of `∂_axis u`.
    pub fn derivative(&self, spec: &[C64], axis: usize) -> Vec<C64> {
        self.map_modes(spec, |m| C64::new(0.0, m.xi[axis]))
    }

    pub(crate) fn check_len(&self, got: usize, expected: usize) -> Result<()> {
        if got != expected {
            return Err(LabError::Dimension { expected, got });
        }
        Ok(())
    }

    pub fn forward(&self, field: &[f64]) -> Result<Vec<C64>> {
        self.check_len(field.len(), self.points())?;
        let plans = plans(self.n);
        let (n, half) = (self.n, self.half());
        let mut spec = vec![C64::new(0.0, 0.0); self.modes()];
        spec.par_chunks_mut(half * n).zip(field.par_chunks(n * n)).for_each(|(out, slab)| {
            let mut line = vec![0.0; n];
            let mut scratch = plans.r2c.make_scratch_vec();
            for (o, row) in out.chunks_mut(half).zip(slab.chunks(n)) {
                line.copy_from_slice(row);
                plans.r2c.process_with_scratch(&mut line, o, &mut scratch).expect("r2c length");
            }
        });
        self.complex_pass(&mut spec, &plans.forward);
        let scale = (2.0 * self.l).powf(1.5) / (n * n * n) as f64;
        spec.par_iter_mut().for_each(|z| *z *= scale);
        Ok(spec)
    }

    pub fn inverse(&self, spec: &[C64]) -> Result<Vec<f64>> {
        self.check_len(spec.len(), self.modes())?;
        self.inverse_owned(spec.to_vec())
    }

    pub fn inverse_owned(&self, mut spec: Vec<C64>) -> Result<Vec<f64>> {
        self.check_len(spec.len(), self.modes())?;
        let plans = plans(self.n);
        let (n, half) = (self.n, self.half());
        self.complex_pass(&mut spec, &plans.inverse);
        let scale = 1.0 / (2.0 * self.l).powf(1.5);
        let mut field = vec![0.0; self.points()];
        field.par_chunks_mut(n * n).zip(spec.par_chunks_mut(half * n)).for_each(|(slab, input)| {
            let mut scratch = plans.c2r.make_scratch_vec();
            for (row, line) in slab.chunks_mut(n).zip(input.chunks_mut(half)) {
                line[0].im = 0.0;
                line[half - 1].im = 0.0;
                plans.c2r.process_with_scratch(line, row, &mut scratch).expect("c2r length");
                row.iter_mut().for_each(|v| *v *= scale);
            }
        });
        Ok(field)
    }

    /// Complex transforms along `y` and `z` of a half spectrum.
    fn complex_pass(&self, spec: &mut [C64], fft: &Arc<dyn Fft<f64>>) {
        let (n, half) = (self.n, self.half());
        let plane = half * n;
        let mut work = vec![C64::new(0.0, 0.0); spec.len()];
        // y axis: work[z][x][y]
        work.par_chunks_mut(plane).zip(spec.par_chunks(plane)).for_each(|(w, s)| {
            for y in 0..n {
                for x in 0..half {
                    w[x * n + y] = s[x + half * y];
                }
            }
            run_batch(fft, w);
        });
        spec.par_chunks_mut(plane).zip(work.par_chunks(plane)).for_each(|(s, w)| {
            for y in 0..n {
                for x in 0..half {
                    s[x + half * y] = w[x * n + y];
                }
            }
        });
        // z axis: work[y][x][z]
        {
            let src: &[C64] = spec;
            work.par_chunks_mut(plane).enumerate().for_each(|(y, w)| {
                for z in 0..n {
                    let base = half * (y + n * z);
                    for x in 0..half {
                        w[x * n + z] = src[base + x];
                    }
                }
                run_batch(fft, w);
            });
        }
        spec.par_chunks_mut(plane).enumerate().for_each(|(z, s)| {
            for y in 0..n {
                let base = y * plane;
                for x in 0..half {
                    s[x + half * y] = work[base + x * n + z];
                }
            }
        });
    }
}

fn run_batch(fft: &Arc<dyn Fft<f64>>, data: &mut [C64]) {
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
}

struct Plans {
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Plans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut real = RealFftPlanner::<f64>::new();
            let mut complex = FftPlanner::<f64>::new();
            Arc::new(Plans {
                r2c: real.plan_fft_forward(n),
                c2r: real.plan_fft_inverse(n),
                forward: complex.plan_fft_forward(n),
                inverse: complex.plan_fft_inverse(n),
            })
        })
        .clone()
}
