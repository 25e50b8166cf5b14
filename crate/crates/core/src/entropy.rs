//! Purity diagnostics of Gaussian states: phase-space area `A = (2/ħ)√det Σ`,
//! linear entropy `s = 1 − 1/A`, and their time derivatives.

use crate::linalg::Mat2;
use crate::model::{DriftMatrix, ScaledDiffusion};
use crate::{Error, Result};

/// Areas down to `1 − PURE_AREA_SLACK` are treated as pure states.
pub const PURE_AREA_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub area: f64,
    pub lin_entropy: f64,
    pub area_rate: f64,
    pub entropy_rate: f64,
}

pub fn area(sigma: &Mat2, hbar: f64) -> Result<f64> {
    let det = sigma.det();
    if !(det > 0.0) {
        return Err(Error::NonPositiveDeterminant { det });
    }
    Ok(2.0 / hbar * libm::sqrt(det))
}

/// `s = 1 − 1/A`, clamped to `[0, 1)`.
pub fn linear_entropy(sigma: &Mat2, hbar: f64) -> Result<f64> {
    let a = area(sigma, hbar)?;
    lin_entropy_from_area(a)
}

fn lin_entropy_from_area(area: f64) -> Result<f64> {
    if area < 1.0 - PURE_AREA_SLACK {
        return Err(Error::UnphysicalState { area });
    }
    Ok((1.0 - 1.0 / area).max(0.0))
}

fn trace_of_product(a: &Mat2, b: &Mat2) -> f64 {
    a.get(0, 0) * b.get(0, 0) + a.get(0, 1) * b.get(1, 0) + a.get(1, 0) * b.get(0, 1) + a.get(1, 1) * b.get(1, 1)
}

/// `Tr(𝒟 Σ⁻¹)` using the closed-form 2×2 inverse.
fn diffusion_trace(sigma: &Mat2, diffusion: &ScaledDiffusion) -> Result<f64> {
    let inv = sigma.inverse().ok_or(Error::SingularSigma)?;
    Ok(trace_of_product(&diffusion.matrix(), &inv))
}

/// `dA/dt = A·(Tr Y + Tr(𝒟 Σ⁻¹))`.
pub fn area_rate(sigma: &Mat2, drift: &DriftMatrix, diffusion: &ScaledDiffusion, hbar: f64) -> Result<f64> {
    let tr = diffusion_trace(sigma, diffusion)?;
    let a = area(sigma, hbar)?;
    Ok(a * (drift.trace() + tr))
}

/// `ds/dt = (dA/dt)/A²`.
pub fn entropy_rate(sigma: &Mat2, drift: &DriftMatrix, diffusion: &ScaledDiffusion, hbar: f64) -> Result<f64> {
    let a = area(sigma, hbar)?;
    Ok(area_rate(sigma, drift, diffusion, hbar)? / (a * a))
}

/// Entropy production rate of an initial state: `(1/A)·(−2λ + Tr(Σ⁻¹𝒟))`.
///
/// Only the trace of the drift enters, so this agrees with [`entropy_rate`]
/// for every drift matrix with `Tr Y = −2λ`.
pub fn initial_rate(sigma0: &Mat2, diffusion: &ScaledDiffusion, lambda: f64, hbar: f64) -> Result<f64> {
    let tr = diffusion_trace(sigma0, diffusion)?;
    let a = area(sigma0, hbar)?;
    Ok((-2.0 * lambda + tr) / a)
}

pub fn report(sigma: &Mat2, drift: &DriftMatrix, diffusion: &ScaledDiffusion, hbar: f64) -> Result<EntropyReport> {
    let a = area(sigma, hbar)?;
    let lin_entropy = lin_entropy_from_area(a)?;
    let area_rate = area_rate(sigma, drift, diffusion, hbar)?;
    Ok(EntropyReport { area: a, lin_entropy, area_rate, entropy_rate: area_rate / (a * a) })
}
