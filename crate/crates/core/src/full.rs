//! The 13×13 Fourier symbol of the linearized operator.
//!
//! State ordering `(n, v₁, v₂, v₃, E₁₁, E₁₂, E₁₃, E₂₁, …, E₃₃)`:
//!
//! ```text
//! n̂′    = −i ξ·v̂
//! v̂′_j  = −μ|ξ|² v̂_j − (λ+μ) ξ_j (ξ·v̂) − i ξ_j n̂ + i Σ_k Ê_jk ξ_k
//! Ê′_jk = i ξ_k v̂_j
//! ```
//!
//! The elastic force is the row divergence `Σ_k ∂_k E_jk`, which is what
//! produces the shear block `[[0, −|ξ|], [|ξ|, −μ|ξ|²]]` on `(Eᵀ − E, ω)`.

use crate::error::{CoreError, Result};
use crate::expm::{expm, Square};
use crate::params::PhysParams;
use crate::C64;

pub const STATE_DIM: usize = 13;

/// Index of `E_jk` (zero-based `j`, `k`) in the state vector.
#[inline]
pub const fn e_index(j: usize, k: usize) -> usize {
    4 + 3 * j + k
}

/// Index of `v_j` in the state vector.
#[inline]
pub const fn v_index(j: usize) -> usize {
    1 + j
}

pub type FullMatrix = Square<STATE_DIM>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSymbol(pub FullMatrix);

impl FullSymbol {
    pub fn apply(&self, x: &[C64; STATE_DIM]) -> [C64; STATE_DIM] {
        apply(&self.0, x)
    }
}

pub fn apply(m: &FullMatrix, x: &[C64; STATE_DIM]) -> [C64; STATE_DIM] {
    let mut out = [C64::new(0.0, 0.0); STATE_DIM];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn full_symbol(params: &PhysParams, xi: [f64; 3]) -> FullSymbol {
    let zero = C64::new(0.0, 0.0);
    let mut a = [[zero; STATE_DIM]; STATE_DIM];
    let xi2: f64 = xi.iter().map(|x| x * x).sum();
    let (mu, lm) = (params.mu, params.lambda);
    for j in 0..3 {
        let vj = v_index(j);
        a[0][vj] = C64::new(0.0, -xi[j]);
        a[vj][0] = C64::new(0.0, -xi[j]);
        for k in 0..3 {
            let visc = -(lm + mu) * xi[j] * xi[k] - if j == k { mu * xi2 } else { 0.0 };
            a[vj][v_index(k)] = C64::new(visc, 0.0);
            a[vj][e_index(j, k)] = C64::new(0.0, xi[k]);
            a[e_index(j, k)][vj] = C64::new(0.0, xi[k]);
        }
    }
    FullSymbol(a)
}

/// `Â(ξ)x` without forming the matrix.
pub fn apply_symbol(params: &PhysParams, xi: [f64; 3], x: &[C64; STATE_DIM]) -> [C64; STATE_DIM] {
    let i = C64::new(0.0, 1.0);
    let mut out = [C64::new(0.0, 0.0); STATE_DIM];
    let xi2: f64 = xi.iter().map(|x| x * x).sum();
    let v = [x[v_index(0)], x[v_index(1)], x[v_index(2)]];
    let xv: C64 = (0..3).map(|j| v[j] * xi[j]).sum();
    out[0] = -i * xv;
    for j in 0..3 {
        let force: C64 = (0..3).map(|k| x[e_index(j, k)] * xi[k]).sum();
        out[v_index(j)] = v[j] * (-params.mu * xi2) - xv * ((params.lambda + params.mu) * xi[j])
            - i * xi[j] * x[0]
            + i * force;
        for k in 0..3 {
            out[e_index(j, k)] = i * xi[k] * v[j];
        }
    }
    out
}

/// `e^{t Â(ξ)}` by scaling and squaring.
pub fn exp_full(symbol: &FullSymbol, t: f64) -> Result<FullMatrix> {
    if !(t >= 0.0) {
        return Err(CoreError::NegativeTime(t));
    }
    let mut scaled = symbol.0;
    for row in scaled.iter_mut() {
        for z in row.iter_mut() {
            *z *= t;
        }
    }
    Ok(expm(&scaled))
}
