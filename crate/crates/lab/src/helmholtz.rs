//! `Λ^s` multipliers and the split of a velocity field into its compressible
//! potential `d = Λ⁻¹ div v` and the antisymmetric `W_ij = Λ⁻¹(∂_i v_j − ∂_j v_i)`.

use vdlab_core::C64;

use crate::error::{LabError, Result};
use crate::grid::{GridSpec, Mode};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Packed upper triangle order of `W`: `(1,2)`, `(1,3)`, `(2,3)` (zero-based below).
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Spectral Helmholtz parts of a velocity field.
#[derive(Debug, Clone, PartialEq)]
pub struct HelmholtzParts {
    pub grid: GridSpec,
    pub d: Vec<C64>,
    /// `Ŵ_ij` for `(i, j)` in [`PAIRS`].
    pub omega: [Vec<C64>; 3],
    /// Modes whose derivative wavevector vanishes (the mean and pure Nyquist
    /// corners), carried through unchanged.
    pub null_modes: Vec<(usize, [C64; 3])>,
}

impl HelmholtzParts {
    /// `Ŵ_ij` at a flat mode index for any `i, j`.
    pub fn omega_at(&self, i: usize, j: usize, index: usize) -> C64 {
        match (i, j) {
            (0, 1) => self.omega[0][index],
            (0, 2) => self.omega[1][index],
            (1, 2) => self.omega[2][index],
            (1, 0) => -self.omega[0][index],
            (2, 0) => -self.omega[1][index],
            (2, 1) => -self.omega[2][index],
            _ => ZERO,
        }
    }

    /// Mean velocity (the zero mode).
    pub fn mean(&self) -> [C64; 3] {
        self.null_modes.iter().find(|(i, _)| *i == 0).map(|(_, v)| *v).unwrap_or([ZERO; 3])
    }
}

/// Multiply every mode by `|ξ|^s`; the zero mode goes to 0 for `s ≠ 0`.
/// Negative powers need a mean-zero field unless `annihilate_mean` is set.
pub fn lambda_power(grid: &GridSpec, spec: &[C64], s: f64, annihilate_mean: bool) -> Result<Vec<C64>> {
    grid.check_len(spec.len(), grid.modes())?;
    if s < 0.0 && !annihilate_mean && spec[0].norm() > 0.0 {
        return Err(LabError::Input("negative power of Λ applied to a field with nonzero mean".into()));
    }
    Ok(grid.map_modes(spec, |m| {
        if s == 0.0 {
            C64::new(1.0, 0.0)
        } else if m.magnitude == 0.0 {
            ZERO
        } else {
            C64::new(m.magnitude.powf(s), 0.0)
        }
    }))
}

fn unit(m: &Mode) -> Option<[f64; 3]> {
    (m.magnitude > 0.0).then(|| m.xi.map(|x| x / m.magnitude))
}

/// `d̂ = i ξ·v̂/|ξ|`, `Ŵ_ij = i(ξ_i v̂_j − ξ_j v̂_i)/|ξ|`.
pub fn decompose(grid: &GridSpec, v: [&[C64]; 3]) -> Result<HelmholtzParts> {
    for c in v {
        grid.check_len(c.len(), grid.modes())?;
    }
    let len = grid.modes();
    let mut d = vec![ZERO; len];
    let mut omega: [Vec<C64>; 3] = std::array::from_fn(|_| vec![ZERO; len]);
    let mut null_modes = Vec::new();
    for z in 0..grid.n() {
        for m in grid.slab_modes(z) {
            let i = m.index;
            let vm = [v[0][i], v[1][i], v[2][i]];
            match unit(&m) {
                None => null_modes.push((i, vm)),
                Some(k) => {
                    d[i] = I * (k[0] * vm[0] + k[1] * vm[1] + k[2] * vm[2]);
                    for (p, &(a, b)) in PAIRS.iter().enumerate() {
                        omega[p][i] = I * (k[a] * vm[b] - k[b] * vm[a]);
                    }
                }
            }
        }
    }
    Ok(HelmholtzParts { grid: *grid, d, omega, null_modes })
}

/// `v̂_j = −i ξ_j d̂/|ξ| − i Σ_i ξ_i Ŵ_ij/|ξ|`, plus the carried null modes.
pub fn reconstruct(parts: &HelmholtzParts) -> [Vec<C64>; 3] {
    let grid = parts.grid;
    let len = grid.modes();
    let mut v: [Vec<C64>; 3] = std::array::from_fn(|_| vec![ZERO; len]);
    for z in 0..grid.n() {
        for m in grid.slab_modes(z) {
            let Some(k) = unit(&m) else { continue };
            let i = m.index;
            for (j, vj) in v.iter_mut().enumerate() {
                let s: C64 = (0..3).map(|a| parts.omega_at(a, j, i) * k[a]).sum();
                vj[i] = -I * (parts.d[i] * k[j] + s);
            }
        }
    }
    for (i, vm) in &parts.null_modes {
        for j in 0..3 {
            v[j][*i] = vm[j];
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_velocity(grid: &GridSpec, seed: u64) -> [Vec<C64>; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        std::array::from_fn(|_| {
            let f: Vec<f64> = (0..grid.points()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            grid.forward(&f).unwrap()
        })
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn round_trip() {
        let g = GridSpec::new(12, 3.0).unwrap();
        let v = random_velocity(&g, 4);
        let parts = decompose(&g, [&v[0], &v[1], &v[2]]).unwrap();
        let w = reconstruct(&parts);
        for j in 0..3 {
            assert!(max_diff(&v[j], &w[j]) < 1e-12);
        }
    }

    #[test]
    fn gradient_and_solenoidal_fields() {
        let g = GridSpec::new(12, 3.0).unwrap();
        let phi = random_velocity(&g, 5)[0].clone();
        let grad: [Vec<C64>; 3] = std::array::from_fn(|j| g.derivative(&phi, j));
        let parts = decompose(&g, [&grad[0], &grad[1], &grad[2]]).unwrap();
        assert!(parts.omega.iter().all(|w| w.iter().all(|z| z.norm() < 1e-12)));
        // d̂ = −|ξ| φ̂ for v̂ = iξφ̂
        let expected = lambda_power(&g, &phi, 1.0, true).unwrap();
        assert!(max_diff(&parts.d, &expected.iter().map(|z| -z).collect::<Vec<_>>()) < 1e-12);
        let back = reconstruct(&HelmholtzParts { omega: std::array::from_fn(|_| vec![ZERO; g.modes()]), ..parts });
        for j in 0..3 {
            assert!(max_diff(&back[j], &grad[j]) < 1e-12);
        }
    }

    #[test]
    fn lambda_calculus() {
        let g = GridSpec::new(12, 3.0).unwrap();
        let mut u = random_velocity(&g, 6)[1].clone();
        u[0] = ZERO;
        let l2 = lambda_power(&g, &u, 2.0, false).unwrap();
        let lap: Vec<C64> = (0..3).fold(vec![ZERO; u.len()], |acc, j| {
            let dd = g.derivative(&g.derivative(&u, j), j);
            acc.iter().zip(&dd).map(|(a, b)| a - b).collect()
        });
        assert!(max_diff(&l2, &lap) < 1e-12 * 100.0);
        let back = lambda_power(&g, &lambda_power(&g, &u, 1.0, false).unwrap(), -1.0, false).unwrap();
        let mut masked = u.clone();
        for z in 0..g.n() {
            for m in g.slab_modes(z) {
                if m.magnitude == 0.0 {
                    masked[m.index] = ZERO;
                }
            }
        }
        assert!(max_diff(&back, &masked) < 1e-12);
        assert!(lambda_power(&g, &lambda_power(&g, &u, 0.0, false).unwrap(), 0.0, false).unwrap() == u);
        let mut with_mean = u.clone();
        with_mean[0] = C64::new(1.0, 0.0);
        assert!(lambda_power(&g, &with_mean, -1.0, false).is_err());
        assert!(lambda_power(&g, &with_mean, -1.0, true).is_ok());
    }
}
