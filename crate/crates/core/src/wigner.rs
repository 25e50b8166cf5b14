//! Gaussian Wigner functions and a finite-difference check of the
//! phase-space (Fokker–Planck) equation of motion.
//!
//! Coordinates are the scaled ones used by [`GaussianState`]; the Σ in the
//! Gaussian is exactly `GaussianState::sigma`. Unscaled values follow from
//! `q = x1/√(mω)`, `p = x2·√(mω)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dynamics::{GaussianState, Trajectory};
use crate::linalg::Mat2;
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x1: f64,
    pub x2: f64,
}

impl PhasePoint {
    pub const fn new(x1: f64, x2: f64) -> Self {
        PhasePoint { x1, x2 }
    }
}

/// Precomputed `Σ⁻¹` and normalization of one Gaussian.
#[derive(Debug, Clone, Copy)]
struct Gaussian {
    mean: Vec2,
    inv: Mat2,
    norm: f64,
}

impl Gaussian {
    fn new(state: &GaussianState) -> Result<Self> {
        if !state.sigma.is_spd(1e-12) {
            return Err(Error::NotSpd);
        }
        let det = state.sigma.det();
        let inv = state.sigma.inverse().ok_or(Error::NotSpd)?;
        Ok(Gaussian { mean: state.mean, inv, norm: 1.0 / (2.0 * PI * libm::sqrt(det)) })
    }

    fn eval(&self, x1: f64, x2: f64) -> f64 {
        let (u, v) = (x1 - self.mean[0], x2 - self.mean[1]);
        let [[a, b], [_, c]] = self.inv.0;
        let q = a * u * u + 2.0 * b * u * v + c * v * v;
        self.norm * libm::exp(-0.5 * q)
    }
}

/// `f_W(x) = [(2π)² det Σ]^{−1/2} exp(−½ (x−m)ᵀ Σ⁻¹ (x−m))`.
pub fn wigner_eval(state: &GaussianState, p: PhasePoint) -> Result<f64> {
    Ok(Gaussian::new(state)?.eval(p.x1, p.x2))
}

/// Tensor-product trapezoid rule on an axis-aligned box around the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Half-width of the box in marginal standard deviations, per axis.
    pub half_width_sigmas: f64,
    /// Nodes per axis.
    pub nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { half_width_sigmas: 8.0, nodes: 241 }
    }
}

/// Smallest accepted box, in standard deviations.
pub const MIN_BOX_SIGMAS: f64 = 6.0;

/// Uniform axis through `center` spanning `±half_width`; trapezoid weights.
fn axis(center: f64, half_width: f64, nodes: usize) -> (Vec<f64>, f64) {
    let h = 2.0 * half_width / (nodes - 1) as f64;
    ((0..nodes).map(|i| center - half_width + i as f64 * h).collect(), h)
}

fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// Zeroth, first and second moments `(∫f, ∫x f, ∫x xᵀ f)` by quadrature.
fn raw_moments(state: &GaussianState, spec: &QuadratureSpec) -> Result<(f64, Vec2, Mat2)> {
    if !(spec.half_width_sigmas >= MIN_BOX_SIGMAS) {
        return Err(Error::BoxTooSmall(spec.half_width_sigmas));
    }
    if spec.nodes < 3 {
        return Err(Error::InvalidArgument("quadrature needs at least 3 nodes per axis"));
    }
    let g = Gaussian::new(state)?;
    let k = spec.half_width_sigmas;
    let (xs, h1) = axis(state.mean[0], k * libm::sqrt(state.sigma.get(0, 0)), spec.nodes);
    let (ys, h2) = axis(state.mean[1], k * libm::sqrt(state.sigma.get(1, 1)), spec.nodes);
    let (mut m0, mut m1, mut m2) = (0.0, [0.0; 2], [0.0; 3]);
    for (i, &x) in xs.iter().enumerate() {
        let wi = trapezoid_weight(i, spec.nodes);
        for (j, &y) in ys.iter().enumerate() {
            let w = wi * trapezoid_weight(j, spec.nodes) * g.eval(x, y);
            m0 += w;
            m1[0] += w * x;
            m1[1] += w * y;
            m2[0] += w * x * x;
            m2[1] += w * x * y;
            m2[2] += w * y * y;
        }
    }
    let area = h1 * h2;
    Ok((m0 * area, [m1[0] * area, m1[1] * area], Mat2::symmetric(m2[0], m2[1], m2[2]).scale(area)))
}

/// `∫∫ f_W dx1 dx2`.
pub fn wigner_normalization(state: &GaussianState, spec: &QuadratureSpec) -> Result<f64> {
    Ok(raw_moments(state, spec)?.0)
}

/// Mean and covariance of the Wigner function recovered by quadrature.
pub fn wigner_moments(state: &GaussianState, spec: &QuadratureSpec) -> Result<(Vec2, Mat2)> {
    let (m0, m1, m2) = raw_moments(state, spec)?;
    let mean = [m1[0] / m0, m1[1] / m0];
    let outer = Mat2::symmetric(mean[0] * mean[0], mean[0] * mean[1], mean[1] * mean[1]);
    Ok((mean, m2.scale(1.0 / m0) - outer))
}

/// Row-major (x1 outer, x2 inner) samples of the Wigner function.
pub fn wigner_grid(
    state: &GaussianState,
    x1_range: (f64, f64),
    x2_range: (f64, f64),
    n1: usize,
    n2: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidArgument("Wigner grid needs at least 2 points per axis"));
    }
    let g = Gaussian::new(state)?;
    let step = |(lo, hi): (f64, f64), n: usize, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let x1 = step(x1_range, n1, i);
        for j in 0..n2 {
            let x2 = step(x2_range, n2, j);
            out.push((x1, x2, g.eval(x1, x2)));
        }
    }
    Ok(out)
}

/// Trapezoid-rule integral of a [`wigner_grid`] table with `n1 × n2` points.
pub fn grid_integral(table: &[(f64, f64, f64)], n1: usize, n2: usize) -> Result<f64> {
    if n1 < 2 || n2 < 2 || table.len() != n1 * n2 {
        return Err(Error::InvalidArgument("table does not match the stated grid shape"));
    }
    let h1 = table[n2].0 - table[0].0;
    let h2 = table[1].1 - table[0].1;
    let mut sum = 0.0;
    for (k, &(_, _, f)) in table.iter().enumerate() {
        sum += trapezoid_weight(k / n2, n1) * trapezoid_weight(k % n2, n2) * f;
    }
    Ok(sum * h1 * h2)
}

/// Residual of `∂ₜf + Σᵢⱼ Yᵢⱼ ∂ᵢ(xⱼ f) − Σᵢⱼ 𝒟ᵢⱼ ∂ᵢ∂ⱼ f` at sample `t_index`.
///
/// `∂ₜ` is a central difference of neighbouring samples, the space
/// derivatives are central differences with step `h_x`. For trajectories
/// produced by the evolver the residual is `O(spacing² + h_x²)`.
pub fn fp_residual(trajectory: &Trajectory, p: PhasePoint, t_index: usize, h_x: f64) -> Result<f64> {
    let len = trajectory.len();
    if t_index == 0 || t_index + 1 >= len {
        return Err(Error::IndexOutOfRange { index: t_index, len });
    }
    if !(h_x > 0.0) {
        return Err(Error::InvalidArgument("spatial step must be positive"));
    }
    let prev = Gaussian::new(&trajectory.samples[t_index - 1].state)?;
    let next = Gaussian::new(&trajectory.samples[t_index + 1].state)?;
    let now = Gaussian::new(&trajectory.samples[t_index].state)?;
    let (x, y) = (p.x1, p.x2);
    let f = |dx: f64, dy: f64| now.eval(x + dx, y + dy);

    let df_dt = (next.eval(x, y) - prev.eval(x, y)) / (2.0 * trajectory.spacing());

    let h = h_x;
    let yd = trajectory.drift.matrix();
    let coord = |j: usize, dx: f64, dy: f64| if j == 0 { x + dx } else { y + dy };
    let mut drift = 0.0;
    for i in 0..2 {
        let (ex, ey) = if i == 0 { (h, 0.0) } else { (0.0, h) };
        for j in 0..2 {
            let plus = coord(j, ex, ey) * f(ex, ey);
            let minus = coord(j, -ex, -ey) * f(-ex, -ey);
            drift += yd.get(i, j) * (plus - minus) / (2.0 * h);
        }
    }

    let dm = trajectory.diffusion.matrix();
    let f0 = f(0.0, 0.0);
    let d11 = (f(h, 0.0) - 2.0 * f0 + f(-h, 0.0)) / (h * h);
    let d22 = (f(0.0, h) - 2.0 * f0 + f(0.0, -h)) / (h * h);
    let d12 = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    let diffusion = dm.get(0, 0) * d11 + 2.0 * dm.get(0, 1) * d12 + dm.get(1, 1) * d22;

    Ok(df_dt + drift - diffusion)
}
