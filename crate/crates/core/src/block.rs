//! The two 2×2 symbol blocks, their eigenvalues and exponentials.
//!
//! Compressible block on `(n̂, d̂)`:
//! `B̂(ξ) = [[0, −|ξ|], [2|ξ|, −(2μ+λ)|ξ|²]]`, characteristic polynomial
//! `κ² + (2μ+λ)|ξ|²κ + 2|ξ|²`.
//!
//! Shear block on each pair `(Ĝ_ij, ω̂_ij)`:
//! `D̂(ξ) = [[0, −|ξ|], [|ξ|, −μ|ξ|²]]`, characteristic polynomial
//! `κ² + μ|ξ|²κ + |ξ|²`.

use core::ops::{Add, Mul, Sub};

use crate::error::{CoreError, Result};
use crate::params::PhysParams;
use crate::phi::{phi1, sinhc};
use crate::C64;

/// Relative tolerance on `|tr² − 4 det|` for flagging coalesced eigenvalues.
pub const TOL_DEGENERATE: f64 = 1e-9;

/// Relative root splitting `|κ₊ − κ₋| / (|κ₊| + |κ₋|)` below which the
/// exponential switches from the two-projection formula to the confluent form.
pub const CONFLUENT_SPLIT: f64 = 1e-2;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }

    #[inline]
    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    #[inline]
    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    #[inline]
    pub fn apply(&self, x: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|z| *z == ZERO)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

/// `B̂(ξ)` for `|ξ| = xi`.
pub fn compressible_symbol(params: &PhysParams, xi: f64) -> Mat2 {
    Mat2::from_real([[0.0, -xi], [2.0 * xi, -params.nu() * xi * xi]])
}

/// `D̂(ξ)` for `|ξ| = xi`.
pub fn shear_symbol(params: &PhysParams, xi: f64) -> Mat2 {
    Mat2::from_real([[0.0, -xi], [xi, -params.mu * xi * xi]])
}

/// Eigen-data of one 2×2 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolEigen {
    /// Root with `Im κ₊ ≥ 0` (oscillatory) or the less damped root (overdamped).
    pub kappa_plus: C64,
    pub kappa_minus: C64,
    /// `tr² − 4 det`, real for both blocks.
    pub discriminant: C64,
    pub degenerate: bool,
    /// `[P₊, P₋]`; absent when the roots coincide exactly.
    pub projections: Option<[Mat2; 2]>,
}

impl SymbolEigen {
    /// `κ₊ − κ₋`.
    #[inline]
    pub fn split(&self) -> C64 {
        self.kappa_plus - self.kappa_minus
    }

    /// Whether the confluent form should be used for exponentials.
    pub fn near_degenerate(&self) -> bool {
        let scale = self.kappa_plus.norm() + self.kappa_minus.norm();
        self.degenerate || self.split().norm() <= CONFLUENT_SPLIT * scale
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(CoreError::InvalidParameter { name: "|xi|", reason: "must be finite and nonnegative" });
    }
    Ok(())
}

/// Roots of `κ² − tr κ + det` for real `tr ≤ 0`, `det ≥ 0`, with the
/// discriminant supplied in a cancellation-free factored form.
fn roots(tr: f64, det: f64, disc: f64) -> (C64, C64) {
    if disc < 0.0 {
        let im = 0.5 * libm::sqrt(-disc);
        (C64::new(0.5 * tr, im), C64::new(0.5 * tr, -im))
    } else {
        let minus = 0.5 * (tr - libm::sqrt(disc));
        let plus = if minus != 0.0 { det / minus } else { 0.0 };
        (C64::new(plus, 0.0), C64::new(minus, 0.0))
    }
}

/// `M − κI` with each diagonal entry taken from whichever of the two
/// equivalent forms (`M_ii − κ` or `κ_other − M_jj`) cancels less.
fn shifted(m: &Mat2, kappa: C64, other: C64) -> Mat2 {
    let a = &m.0;
    let pick = |mii: C64, mjj: C64| {
        let direct = (mii.norm() + kappa.norm(), mii - kappa);
        let swapped = (other.norm() + mjj.norm(), other - mjj);
        if direct.0 <= swapped.0 {
            direct.1
        } else {
            swapped.1
        }
    };
    Mat2([[pick(a[0][0], a[1][1]), a[0][1]], [a[1][0], pick(a[1][1], a[0][0])]])
}

fn assemble(symbol: &Mat2, tr: f64, det: f64, disc: f64) -> SymbolEigen {
    let (kp, km) = roots(tr, det, disc);
    let scale = kp.norm() + km.norm() + f64::MIN_POSITIVE;
    let degenerate = disc.abs() <= TOL_DEGENERATE * scale * scale;
    let projections = if kp != km {
        let inv = ONE / (kp - km);
        let p_plus = shifted(symbol, km, kp).scale(inv);
        let p_minus = shifted(symbol, kp, km).scale(-inv);
        Some([p_plus, p_minus])
    } else {
        None
    };
    SymbolEigen { kappa_plus: kp, kappa_minus: km, discriminant: C64::new(disc, 0.0), degenerate, projections }
}

/// κ± = −(μ+λ/2)|ξ|² ± ½√((2μ+λ)²|ξ|⁴ − 8|ξ|²).
pub fn eigen_compressible(params: &PhysParams, xi: f64) -> Result<SymbolEigen> {
    check_xi(xi)?;
    let nu = params.nu();
    let x2 = xi * xi;
    let disc = x2 * (nu * nu * x2 - 8.0);
    Ok(assemble(&compressible_symbol(params, xi), -nu * x2, 2.0 * x2, disc))
}

/// κ± = −½μ|ξ|² ± ½√(μ²|ξ|⁴ − 4|ξ|²).
pub fn eigen_shear(params: &PhysParams, xi: f64) -> Result<SymbolEigen> {
    check_xi(xi)?;
    let mu = params.mu;
    let x2 = xi * xi;
    let disc = x2 * (mu * mu * x2 - 4.0);
    Ok(assemble(&shear_symbol(params, xi), -mu * x2, x2, disc))
}

/// `e^{t M}` for a block with precomputed eigen-data.
///
/// Well-separated roots use `e^{κ₊t}P₊ + e^{κ₋t}P₋`. Close roots use the
/// confluent form `e^{mt}[cosh(δt/2) I + sinh(δt/2)/(δ/2) (M − mI)]` with
/// `m = (κ₊+κ₋)/2`, `δ = κ₊ − κ₋`, which is `e^{κt}(I + t(M − κI))` at
/// exact coalescence.
pub fn exp_block(symbol: &Mat2, eigen: &SymbolEigen, t: f64) -> Result<Mat2> {
    if !(t >= 0.0) {
        return Err(CoreError::NegativeTime(t));
    }
    match eigen.projections {
        Some([pp, pm]) if !eigen.near_degenerate() => {
            Ok(pp.scale((eigen.kappa_plus * t).exp()) + pm.scale((eigen.kappa_minus * t).exp()))
        }
        _ => Ok(confluent_exp(symbol, eigen, t)),
    }
}

fn confluent_exp(symbol: &Mat2, eigen: &SymbolEigen, t: f64) -> Mat2 {
    let m = (eigen.kappa_plus + eigen.kappa_minus) * 0.5;
    let delta = eigen.split();
    let a = &symbol.0;
    let half_gap = (a[0][0] - a[1][1]) * 0.5;
    let centred = Mat2([[half_gap, a[0][1]], [a[1][0], -half_gap]]);
    let growth = (m * t).exp();
    let c = (delta * (0.5 * t)).cosh();
    (Mat2::identity().scale(c) + centred.scale(sinhc(delta, t))).scale(growth)
}

/// `∫₀ᵗ e^{sM} ds`, built from `φ₁` of each eigenvalue.
pub fn integral_block(symbol: &Mat2, eigen: &SymbolEigen, t: f64) -> Result<Mat2> {
    if !(t >= 0.0) {
        return Err(CoreError::NegativeTime(t));
    }
    if symbol.is_zero() {
        return Ok(Mat2::identity().scale(C64::new(t, 0.0)));
    }
    match eigen.projections {
        Some([pp, pm]) if !eigen.near_degenerate() => {
            Ok(pp.scale(phi1(eigen.kappa_plus, t)) + pm.scale(phi1(eigen.kappa_minus, t)))
        }
        _ => {
            let tm = symbol.scale(C64::new(t, 0.0));
            if tm.max_abs() < 0.5 {
                // Σ t^{k+1} M^k / (k+1)!
                let mut term = Mat2::identity().scale(C64::new(t, 0.0));
                let mut acc = term;
                for k in 1..30 {
                    term = (term * tm).scale(C64::new(1.0 / (k as f64 + 1.0), 0.0));
                    acc = acc + term;
                }
                Ok(acc)
            } else {
                let inv = symbol.inverse().expect("nonzero block with nonzero determinant");
                let e = confluent_exp(symbol, eigen, t);
                Ok(inv * (e - Mat2::identity()))
            }
        }
    }
}
