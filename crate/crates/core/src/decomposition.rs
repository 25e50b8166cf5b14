//! Area/squeezing/rotation form of 2×2 symmetric positive-definite matrices:
//!
//! ```text
//! M = (ħA/2) · Oᵀ diag(ℵ², ℵ⁻²) O,    O = [[cos θ, −sin θ], [sin θ, cos θ]]
//! ```
//!
//! The congruence has period π in θ and is invariant under
//! `(ℵ, θ) → (1/ℵ, θ + π/2)`; [`decompose`] picks the branch `ℵ ≥ 1`,
//! `θ ∈ [0, π)`, and `θ = 0` for isotropic matrices.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::linalg::Mat2;
use crate::model::ScaledDiffusion;
use crate::{Error, Result};

/// Below this value of `ℵ² − 1` the matrix is treated as isotropic.
pub const ISOTROPY_TOLERANCE: f64 = 1e-12;

/// Decomposition of a dispersion matrix Σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovDecomposition {
    /// Phase-space area `(2/ħ)√det Σ`.
    pub area: f64,
    /// Squeezing parameter ℵ.
    pub aleph: f64,
    /// Rotation angle θ.
    pub theta: f64,
}

/// Decomposition of a scaled diffusion matrix 𝒟.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffDecomposition {
    /// Diffusion intensity Δ.
    pub delta: f64,
    /// Anisotropy d.
    pub d: f64,
    /// Rotation angle φ.
    pub phi: f64,
}

/// Reduces an angle to `[0, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = libm::fmod(theta, PI);
    if t < 0.0 {
        t += PI;
    }
    // fmod of a value just below a multiple of π, plus π, can round up to π
    if t >= PI {
        t = 0.0;
    }
    t
}

/// Maps any `(ℵ, θ)` to the equivalent representative with `ℵ ≥ 1`, `θ ∈ [0, π)`.
pub fn canonical_squeezing(aleph: f64, theta: f64) -> (f64, f64) {
    if aleph < 1.0 {
        (1.0 / aleph, wrap_angle(theta + FRAC_PI_2))
    } else {
        (aleph, wrap_angle(theta))
    }
}

fn compose_raw(scale: f64, aleph: f64, theta: f64) -> Mat2 {
    let a2 = aleph * aleph;
    let o = Mat2::rotation(theta);
    (o.transpose() * Mat2::diag(a2, 1.0 / a2) * o).symmetrize().scale(scale)
}

/// `(scale, ℵ, θ)` such that `M = scale · Oᵀ diag(ℵ², ℵ⁻²) O`, with `scale = √det M`.
fn decompose_raw(m: &Mat2) -> (f64, f64, f64) {
    let s = m.symmetrize();
    let (hi, _) = s.sym_eigenvalues();
    let root_det = libm::sqrt(s.det());
    let aleph2 = hi / root_det;
    if aleph2 - 1.0 < ISOTROPY_TOLERANCE {
        return (root_det, 1.0, 0.0);
    }
    // M11 − M22 = scale·(ℵ² − ℵ⁻²)·cos 2θ,  M12 = −scale·(ℵ² − ℵ⁻²)·sin 2θ / 2
    let [[a, b], [_, c]] = s.0;
    let theta = 0.5 * libm::atan2(-2.0 * b, a - c);
    (root_det, libm::sqrt(aleph2), wrap_angle(theta))
}

fn check_spd(m: &Mat2) -> Result<()> {
    if m.is_spd(1e-12) {
        Ok(())
    } else {
        Err(Error::NotSpd)
    }
}

pub fn decompose(m: &Mat2, hbar: f64) -> Result<CovDecomposition> {
    check_spd(m)?;
    let (root_det, aleph, theta) = decompose_raw(m);
    Ok(CovDecomposition { area: 2.0 / hbar * root_det, aleph, theta })
}

/// `(ħA/2) · Oᵀ diag(ℵ², ℵ⁻²) O`.
pub fn compose(dec: &CovDecomposition, hbar: f64) -> Mat2 {
    compose_raw(0.5 * hbar * dec.area, dec.aleph, dec.theta)
}

pub fn decompose_diffusion(diffusion: &ScaledDiffusion, hbar: f64) -> Result<DiffDecomposition> {
    let m = diffusion.matrix();
    let det = m.det();
    if !(det > 0.0) {
        return Err(Error::SingularDiffusion { det });
    }
    check_spd(&m)?;
    let (root_det, d, phi) = decompose_raw(&m);
    Ok(DiffDecomposition { delta: 2.0 / hbar * root_det, d, phi })
}

/// `(ħΔ/2) · O_Dᵀ diag(d², d⁻²) O_D`.
pub fn compose_diffusion(dec: &DiffDecomposition, hbar: f64) -> ScaledDiffusion {
    ScaledDiffusion::from_matrix(compose_raw(0.5 * hbar * dec.delta, dec.d, dec.phi))
}
