//! Per-mode kernels for the linearized compressible viscoelastic system.
//!
//! Everything in this crate acts on a single Fourier mode or on a short
//! time series, so it stays `no_std` (with `alloc`). Field-level machinery
//! (FFTs, states, propagation, file formats) lives in the `vdlab` crate.
//!
//! Conventions used throughout:
//!
//! * The state is ordered `(n, v₁, v₂, v₃, E₁₁, E₁₂, …, E₃₃)`, row-major in `E`.
//! * The compressible block acts on `(n̂, d̂)` with `d = Λ⁻¹ div v`.
//! * The shear block acts on `(Ĝ, ω̂)` with `G = Eᵀ − E` and
//!   `ω_ij = Λ⁻¹(∂_j v_i − ∂_i v_j)`.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod block;
pub mod cutoff;
pub mod error;
pub mod expansion;
pub mod expm;
pub mod fit;
pub mod full;
pub mod params;
pub mod phi;
pub mod rates;
pub mod reduced;

pub use num_complex::Complex64 as C64;

pub use block::{
    compressible_symbol, eigen_compressible, eigen_shear, exp_block, integral_block, shear_symbol,
    Mat2, SymbolEigen,
};
pub use error::CoreError;
pub use full::{apply_symbol, e_index, v_index, exp_full, full_symbol, FullMatrix, FullSymbol, STATE_DIM};
pub use params::PhysParams;
pub use phi::phi1;
pub use reduced::{propagate_mode, ModeBlocks};
