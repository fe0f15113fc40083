//! Exact per-mode propagation through the compressible and shear blocks.
//!
//! For `ξ ≠ 0` with `k̂ = ξ/|ξ|`, put `a = Ê k̂` and `c = n̂ + k̂·a`. The part
//! `R = (c/2, 0, Ê(I − k̂k̂ᵀ) + (c/2)k̂k̂ᵀ)` lies in the kernel of `Â(ξ)`, and
//! the rest `U − R` has `n̂ − c/2`, `d̂ = i k̂·v̂` on the compressible block and
//! `Ĝ_ij = k̂_i a_j − a_i k̂_j`, `ω̂_ij = i(k̂_j v̂_i − k̂_i v̂_j)` on the shear
//! block. `Ê(t)` is rebuilt from `∫₀ᵗ v̂ ds`.

use crate::block::{
    compressible_symbol, eigen_compressible, eigen_shear, exp_block, integral_block, shear_symbol, Mat2,
};
use crate::error::Result;
use crate::full::{e_index, v_index, STATE_DIM};
use crate::params::PhysParams;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Block exponentials and their time integrals at one `|ξ|` and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBlocks {
    pub xi: f64,
    pub compressible: Mat2,
    pub compressible_integral: Mat2,
    pub shear: Mat2,
    pub shear_integral: Mat2,
}

impl ModeBlocks {
    pub fn new(params: &PhysParams, xi: f64, t: f64) -> Result<Self> {
        let bc = compressible_symbol(params, xi);
        let ec = eigen_compressible(params, xi)?;
        let bs = shear_symbol(params, xi);
        let es = eigen_shear(params, xi)?;
        Ok(Self {
            xi,
            compressible: exp_block(&bc, &ec, t)?,
            compressible_integral: integral_block(&bc, &ec, t)?,
            shear: exp_block(&bs, &es, t)?,
            shear_integral: integral_block(&bs, &es, t)?,
        })
    }
}

fn magnitude(xi: &[f64; 3]) -> f64 {
    libm::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])
}

/// Replace `u` by `e^{tÂ(ξ)}u`; `blocks` must be built at `|ξ|` and `t`.
/// A zero wavevector leaves `u` unchanged.
pub fn propagate_mode(blocks: &ModeBlocks, xi: &[f64; 3], u: &mut [C64; STATE_DIM]) {
    let x = magnitude(xi);
    if x == 0.0 {
        return;
    }
    let k = [xi[0] / x, xi[1] / x, xi[2] / x];
    let v = [u[v_index(0)], u[v_index(1)], u[v_index(2)]];
    let mut a = [C64::new(0.0, 0.0); 3];
    for (j, aj) in a.iter_mut().enumerate() {
        *aj = (0..3).map(|m| u[e_index(j, m)] * k[m]).sum();
    }
    let c = u[0] + k[0] * a[0] + k[1] * a[1] + k[2] * a[2];
    let half_c = c * 0.5;
    let d0 = I * (k[0] * v[0] + k[1] * v[1] + k[2] * v[2]);
    let comp0 = [u[0] - half_c, d0];
    let [n_t, d_t] = blocks.compressible.apply(comp0);
    let [_, d_int] = blocks.compressible_integral.apply(comp0);

    // W_ij = i(k_i v_j − k_j v_i); the shear block acts on (G, −W).
    let mut w_t = [C64::new(0.0, 0.0); 3];
    let mut w_int = [C64::new(0.0, 0.0); 3];
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        let g = k[i] * a[j] - a[i] * k[j];
        let w = I * (k[i] * v[j] - k[j] * v[i]);
        let pair = [g, -w];
        w_t[p] = -blocks.shear.apply(pair)[1];
        w_int[p] = -blocks.shear_integral.apply(pair)[1];
    }
    let v_t = velocity(&k, d_t, &w_t);
    let v_int = velocity(&k, d_int, &w_int);

    u[0] = n_t + half_c;
    for j in 0..3 {
        u[v_index(j)] = v_t[j];
        for m in 0..3 {
            u[e_index(j, m)] += I * xi[m] * v_int[j];
        }
    }
}

/// `v̂_j = −i k̂_j d̂ − i Σ_i k̂_i Ŵ_ij` from the packed upper triangle of `Ŵ`.
fn velocity(k: &[f64; 3], d: C64, w: &[C64; 3]) -> [C64; 3] {
    let full = |i: usize, j: usize| -> C64 {
        match (i, j) {
            (0, 1) => w[0],
            (0, 2) => w[1],
            (1, 2) => w[2],
            (1, 0) => -w[0],
            (2, 0) => -w[1],
            (2, 1) => -w[2],
            _ => C64::new(0.0, 0.0),
        }
    };
    let mut out = [C64::new(0.0, 0.0); 3];
    for (j, o) in out.iter_mut().enumerate() {
        let s: C64 = (0..3).map(|i| full(i, j) * k[i]).sum();
        *o = -I * (d * k[j] + s);
    }
    out
}
