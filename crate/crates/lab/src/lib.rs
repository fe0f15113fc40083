//! Pseudo-spectral laboratory for the compressible viscoelastic system on a
//! periodic box: grids and transforms, states and their norms, exact linear
//! propagation, an exponential integrator for the nonlinear system, decay
//! analysis and the file formats used by the `vdlab` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod helmholtz;
pub mod plot;
pub mod propagator;
pub mod series;
pub mod simulation;
pub mod snapshot;
pub mod state;

pub use error::{LabError, Result};
pub use grid::{GridSpec, Mode, WaveVector};
pub use vdlab_core as core;
