//! Time evolution of Gaussian states.
//!
//! Means follow `dX/dt = Y·X` and the dispersion matrix follows the
//! Lyapunov-type equation `dΣ/dt = YΣ + ΣYᵀ + 2𝒟`. Both are integrated jointly
//! with fixed-step classical RK4, so trajectories are reproducible bit for bit.

use alloc::vec::Vec;

use crate::decomposition::{compose, CovDecomposition};
use crate::entropy::{self, EntropyReport};
use crate::linalg::{vec_add_scaled, Mat2, Vec2};
use crate::model::{DriftMatrix, ModelParams, ScaledDiffusion};
use crate::{Error, Result};

/// Relative slack allowed below the Heisenberg bound when constructing states.
pub const HEISENBERG_SLACK: f64 = 1e-9;

/// Gaussian state in scaled phase-space coordinates.
///
/// `sigma` holds `[[mω σ_qq, σ_pq], [σ_pq, σ_pp/(mω)]]`, so `x1 = √(mω)·q` and
/// `x2 = p/√(mω)` have covariance exactly `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean: Vec2,
    pub sigma: Mat2,
}

impl GaussianState {
    /// Checked constructor: Σ must be SPD and obey `det Σ ≥ ħ²/4`.
    pub fn new(mean: Vec2, sigma: Mat2, hbar: f64) -> Result<Self> {
        if !sigma.is_spd(1e-12) || !mean.iter().all(|x| x.is_finite()) {
            return Err(Error::NotSpd);
        }
        if heisenberg_slack(&sigma, hbar) < -HEISENBERG_SLACK * 0.25 * hbar * hbar {
            return Err(Error::UnphysicalState { area: entropy::area(&sigma, hbar)? });
        }
        Ok(GaussianState { mean, sigma: sigma.symmetrize() })
    }

    pub fn from_decomposition(mean: Vec2, dec: &CovDecomposition, hbar: f64) -> Result<Self> {
        if !(dec.area > 0.0 && dec.aleph > 0.0) {
            return Err(Error::InvalidArgument("area and squeezing must be positive"));
        }
        Self::new(mean, compose(dec, hbar), hbar)
    }

    /// Minimum-uncertainty isotropic state, `Σ = (ħ/2)·I`.
    pub fn coherent(mean: Vec2, hbar: f64) -> Self {
        GaussianState { mean, sigma: Mat2::scalar(0.5 * hbar) }
    }

    /// Mean position and momentum in unscaled units.
    pub fn unscaled_mean(&self, mass: f64, omega: f64) -> (f64, f64) {
        let s = libm::sqrt(mass * omega);
        (self.mean[0] / s, self.mean[1] * s)
    }
}

/// `YΣ + ΣYᵀ + 2𝒟`.
pub fn rhs_sigma(sigma: &Mat2, drift: &DriftMatrix, diffusion: &ScaledDiffusion) -> Mat2 {
    let y = drift.matrix();
    y * *sigma + *sigma * y.transpose() + diffusion.matrix().scale(2.0)
}

pub fn rhs_mean(mean: Vec2, drift: &DriftMatrix) -> Vec2 {
    drift.matrix().mul_vec(mean)
}

/// `det Σ − ħ²/4`.
pub fn heisenberg_slack(sigma: &Mat2, hbar: f64) -> f64 {
    sigma.det() - 0.25 * hbar * hbar
}

fn positivity_violation(sigma: &Mat2) -> Option<f64> {
    let (_, lo) = sigma.sym_eigenvalues();
    let ok = sigma.is_finite() && lo > -1e-10 * sigma.trace().abs();
    if ok {
        None
    } else {
        Some(lo)
    }
}

/// One classical RK4 step of size `dt` for mean and dispersion together.
///
/// A zero step returns the state unchanged. The new Σ is re-symmetrized and
/// rejected if its smallest eigenvalue drops below `−10⁻¹⁰·Tr Σ`.
pub fn step_rk4(
    state: &GaussianState,
    drift: &DriftMatrix,
    diffusion: &ScaledDiffusion,
    dt: f64,
) -> Result<GaussianState> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep(dt));
    }
    if dt == 0.0 {
        return Ok(*state);
    }
    let f = |m: Vec2, s: &Mat2| (rhs_mean(m, drift), rhs_sigma(s, drift, diffusion));
    let (m0, s0) = (state.mean, state.sigma);

    let (km1, ks1) = f(m0, &s0);
    let (km2, ks2) = f(vec_add_scaled(m0, 0.5 * dt, km1), &(s0 + ks1.scale(0.5 * dt)));
    let (km3, ks3) = f(vec_add_scaled(m0, 0.5 * dt, km2), &(s0 + ks2.scale(0.5 * dt)));
    let (km4, ks4) = f(vec_add_scaled(m0, dt, km3), &(s0 + ks3.scale(dt)));

    let w = dt / 6.0;
    let mean = [
        m0[0] + w * (km1[0] + 2.0 * km2[0] + 2.0 * km3[0] + km4[0]),
        m0[1] + w * (km1[1] + 2.0 * km2[1] + 2.0 * km3[1] + km4[1]),
    ];
    let incr = ks1 + ks2.scale(2.0) + ks3.scale(2.0) + ks4;
    let sigma = (s0 + incr.scale(w)).symmetrize();

    if let Some(min_eigenvalue) = positivity_violation(&sigma) {
        return Err(Error::LostPositivity { min_eigenvalue });
    }
    Ok(GaussianState { mean, sigma })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: GaussianState,
    pub entropy: EntropyReport,
}

/// Uniformly spaced samples of an RK4 run, starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub hbar: f64,
    pub drift: DriftMatrix,
    pub diffusion: ScaledDiffusion,
    /// Integrator step.
    pub dt: f64,
    pub sample_every: usize,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    /// Time between consecutive samples.
    pub fn spacing(&self) -> f64 {
        self.dt * self.sample_every as f64
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

/// Integrates `model` from `state` over `[0, t_final]`.
///
/// The horizon is rounded to the nearest whole number of steps; every
/// `sample_every`-th step is recorded, step 0 included.
pub fn evolve(
    state: &GaussianState,
    model: &ModelParams,
    t_final: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    evolve_with(state, &model.drift(), &model.scaled_diffusion(), model.hbar, t_final, dt, sample_every)
}

/// [`evolve`] with explicit drift and diffusion matrices.
pub fn evolve_with(
    state: &GaussianState,
    drift: &DriftMatrix,
    diffusion: &ScaledDiffusion,
    hbar: f64,
    t_final: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidArgument("t_final must be finite and non-negative"));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep(dt));
    }
    if sample_every == 0 {
        return Err(Error::InvalidArgument("sample_every must be at least 1"));
    }
    let n_steps = libm::round(t_final / dt) as usize;
    let sample = |k: usize, s: &GaussianState| -> Result<Sample> {
        Ok(Sample { t: k as f64 * dt, state: *s, entropy: entropy::report(&s.sigma, drift, diffusion, hbar)? })
    };

    let mut samples = Vec::with_capacity(n_steps / sample_every + 1);
    let mut current = *state;
    samples.push(sample(0, &current)?);
    for k in 1..=n_steps {
        current = step_rk4(&current, drift, diffusion, dt).map_err(|e| match e {
            Error::LostPositivity { min_eigenvalue } => {
                Error::IntegrationFailure { time: k as f64 * dt, min_eigenvalue }
            }
            other => other,
        })?;
        if k % sample_every == 0 {
            samples.push(sample(k, &current)?);
        }
    }
    Ok(Trajectory { hbar, drift: *drift, diffusion: *diffusion, dt, sample_every, samples })
}

/// Solution of `YΣ + ΣYᵀ + 2𝒟 = 0` for Hurwitz `Y`.
pub fn stationary_covariance(drift: &DriftMatrix, diffusion: &ScaledDiffusion) -> Result<Mat2> {
    if !drift.is_hurwitz() {
        return Err(Error::NotStable);
    }
    let [[y11, y12], [y21, y22]] = drift.matrix().0;
    let [[d11, d12], [_, d22]] = diffusion.matrix().0;
    // unknowns (s11, s12, s22)
    let mut a = [
        [y11, y12, 0.0, -d11],
        [y21, y11 + y22, y12, -2.0 * d12],
        [0.0, y21, y22, -d22],
    ];
    let scale = a.iter().flat_map(|r| r[..3].iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    let x = solve3(&mut a, 1e-14 * scale).ok_or(Error::SingularSystem)?;
    Ok(Mat2::symmetric(x[0], x[1], x[2]))
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 system.
fn solve3(a: &mut [[f64; 4]; 3], pivot_tol: f64) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if !(a[piv][col].abs() > pivot_tol) {
            return None;
        }
        a.swap(col, piv);
        for row in col + 1..3 {
            let pivot_row = a[col];
            let f = a[row][col] / pivot_row[col];
            for (dst, src) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][3] - tail) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rot() -> DriftMatrix {
        DriftMatrix::from_matrix(Mat2::new(0.0, 1.0, -1.0, 0.0))
    }

    fn zero_diff() -> ScaledDiffusion {
        ScaledDiffusion::from_matrix(Mat2::ZERO)
    }

    fn model(lambda: f64, mu: f64, omega: f64, d_qq: f64, d_pp: f64, d_pq: f64) -> ModelParams {
        ModelParams { mass: 1.0, omega, mu, hbar: 1.0, d_qq, d_pp, d_pq, lambda }
    }

    #[test]
    fn rhs_sigma_examples() {
        let hbar = 1.4;
        let pure = Mat2::scalar(0.5 * hbar);
        assert_eq!(rhs_sigma(&pure, &rot(), &zero_diff()), Mat2::ZERO);

        let (lambda, delta) = (0.3, 0.8);
        let y = DriftMatrix::from_matrix(Mat2::scalar(-lambda));
        let d = ScaledDiffusion::from_matrix(Mat2::scalar(0.5 * hbar * delta));
        let r = rhs_sigma(&pure, &y, &d);
        assert!((r - Mat2::scalar(hbar * delta - hbar * lambda)).frobenius_norm() < 1e-15);

        let d = ScaledDiffusion::from_matrix(Mat2::symmetric(0.3, -0.1, 0.7));
        let any = Mat2::symmetric(2.0, 0.4, 0.9);
        let r = rhs_sigma(&any, &DriftMatrix::from_matrix(Mat2::ZERO), &d);
        assert_eq!(r, d.matrix().scale(2.0));
    }

    #[test]
    fn rhs_mean_examples() {
        assert_eq!(rhs_mean([1.0, 0.0], &rot()), [0.0, -1.0]);
        assert_eq!(rhs_mean([1.0, 1.0], &DriftMatrix::from_matrix(Mat2::scalar(-1.0))), [-1.0, -1.0]);
        let y = DriftMatrix::from_matrix(Mat2::new(-1.0, 2.0, -2.0, -1.0));
        assert_eq!(rhs_mean([2.0, 0.0], &y), [-2.0, -4.0]);
    }

    #[test]
    fn heisenberg_slack_examples() {
        let h = 0.7;
        assert!(heisenberg_slack(&Mat2::scalar(0.5 * h), h).abs() < 1e-16);
        assert!((heisenberg_slack(&Mat2::scalar(h), h) - 0.75 * h * h).abs() < 1e-16);
        assert!((heisenberg_slack(&Mat2::scalar(0.25 * h), h) + 3.0 / 16.0 * h * h).abs() < 1e-16);
    }

    #[test]
    fn state_constructor_checks() {
        assert!(GaussianState::new([0.0, 0.0], Mat2::scalar(0.5), 1.0).is_ok());
        assert!(matches!(
            GaussianState::new([0.0, 0.0], Mat2::scalar(0.25), 1.0),
            Err(Error::UnphysicalState { .. })
        ));
        assert_eq!(GaussianState::new([0.0, 0.0], Mat2::symmetric(1.0, 2.0, 1.0), 1.0), Err(Error::NotSpd));
    }

    #[test]
    fn zero_step_is_identity() {
        let s = GaussianState { mean: [0.3, -0.2], sigma: Mat2::symmetric(1.0, 0.2, 0.6) };
        let d = ScaledDiffusion::from_matrix(Mat2::scalar(0.4));
        assert_eq!(step_rk4(&s, &rot(), &d, 0.0).unwrap(), s);
        assert!(matches!(step_rk4(&s, &rot(), &d, -0.1), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn unitary_step_conserves_determinant() {
        let s = GaussianState { mean: [1.0, 0.0], sigma: Mat2::symmetric(2.0, 0.7, 0.6) };
        let y = DriftMatrix::from_matrix(Mat2::new(0.0, 1.3, -1.3, 0.0));
        for dt in [1e-2, 5e-2, 1e-1] {
            let next = step_rk4(&s, &y, &zero_diff(), dt).unwrap();
            let err = (next.sigma.det() - s.sigma.det()).abs() / s.sigma.det();
            // leading error term is O(dt⁵)
            assert!(err < 10.0 * dt.powi(5), "dt={dt} err={err}");
        }
    }

    #[test]
    fn isotropic_area_matches_closed_form() {
        // μ = 0 and 𝒟 = (ħΔ/2)I keep Σ = σ(t)·I with σ' = −2λσ + ħΔ
        let (hbar, lambda, delta, omega) = (1.0, 0.5, 1.5, 1.0);
        let dq = 0.5 * hbar * delta;
        let m = model(lambda, 0.0, omega, dq, dq, 0.0);
        let traj = evolve(&GaussianState::coherent([0.2, 0.1], hbar), &m, 1.0, 1e-3, 1000).unwrap();
        let s_inf = hbar * delta / (2.0 * lambda);
        let sigma = s_inf + (0.5 * hbar - s_inf) * libm::exp(-2.0 * lambda);
        let want = 2.0 * sigma / hbar;
        assert_eq!(traj.len(), 2);
        assert!((traj.last().entropy.area - want).abs() < 1e-8);
    }

    #[test]
    fn evolve_zero_horizon() {
        let m = model(0.2, 0.0, 1.0, 0.5, 0.5, 0.0);
        let s = GaussianState::coherent([1.0, 0.0], 1.0);
        let traj = evolve(&s, &m, 0.0, 0.01, 1).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.samples[0].state, s);
        assert_eq!(traj.samples[0].t, 0.0);
    }

    #[test]
    fn evolve_argument_errors() {
        let m = model(0.2, 0.0, 1.0, 0.5, 0.5, 0.0);
        let s = GaussianState::coherent([1.0, 0.0], 1.0);
        assert!(matches!(evolve(&s, &m, 1.0, 0.0, 1), Err(Error::InvalidStep(_))));
        assert!(matches!(evolve(&s, &m, -1.0, 0.1, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(evolve(&s, &m, 1.0, 0.1, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn unitary_model_keeps_entropy_constant() {
        let m = model(0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let s = GaussianState::new([1.0, -0.5], Mat2::symmetric(1.2, 0.3, 0.9), 1.0).unwrap();
        let traj = evolve(&s, &m, 10.0, 1e-2, 10).unwrap();
        let s0 = traj.samples[0].entropy.lin_entropy;
        for smp in &traj.samples {
            assert!((smp.entropy.lin_entropy - s0).abs() < 1e-10);
        }
        let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn damped_isotropic_model_approaches_stationary_area() {
        let (lambda, delta) = (0.5, 1.2);
        let m = model(lambda, 0.0, 1.0, 0.5 * delta, 0.5 * delta, 0.0);
        let traj = evolve(&GaussianState::coherent([1.0, 0.0], 1.0), &m, 40.0, 1e-2, 100).unwrap();
        assert!((traj.last().entropy.area - delta / lambda).abs() < 1e-12);
    }

    #[test]
    fn blow_up_is_reported_with_time() {
        // anti-diffusion drives Σ indefinite
        let y = DriftMatrix::from_matrix(Mat2::ZERO);
        let d = ScaledDiffusion::from_matrix(Mat2::diag(-1.0, 0.0));
        let s = GaussianState::coherent([0.0, 0.0], 1.0);
        match evolve_with(&s, &y, &d, 1.0, 1.0, 0.05, 1000) {
            Err(Error::IntegrationFailure { time, .. }) => assert!((0.25..0.35).contains(&time)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stationary_examples() {
        let (hbar, lambda, delta) = (1.0, 0.4, 1.3);
        let mut m = model(lambda, 0.0, 2.0, 0.5 * hbar * delta, 0.5 * hbar * delta, 0.0);
        m.mass = 0.5;
        let s = stationary_covariance(&m.drift(), &m.scaled_diffusion()).unwrap();
        assert!((s - Mat2::scalar(hbar * delta / (2.0 * lambda))).frobenius_norm() < 1e-14);

        let m = model(0.0, 0.0, 1.0, 0.5, 0.5, 0.0);
        assert_eq!(stationary_covariance(&m.drift(), &m.scaled_diffusion()), Err(Error::NotStable));
    }

    proptest! {
        #[test]
        fn stationary_residual(
            lambda in 0.05..2.0f64, mu in -3.0..3.0f64, omega in 0.0..3.0f64,
            d11 in 0.0..3.0f64, d22 in 0.0..3.0f64, r in -1.0..1.0f64,
        ) {
            let y = DriftMatrix::from_matrix(Mat2::new(-(lambda - mu), omega, -omega, -(lambda + mu)));
            prop_assume!(y.is_hurwitz());
            let d = ScaledDiffusion::from_matrix(Mat2::symmetric(d11, r * libm::sqrt(d11 * d22), d22));
            let s = stationary_covariance(&y, &d).unwrap();
            let res = rhs_sigma(&s, &y, &d).frobenius_norm();
            prop_assert!(res <= 1e-10 * d.matrix().scale(2.0).frobenius_norm() + 1e-300);
        }

        #[test]
        fn step_preserves_symmetry(
            lambda in -0.5..1.0f64, mu in -1.0..1.0f64, omega in 0.0..2.0f64,
            s11 in 0.5..2.0f64, s22 in 0.5..2.0f64, r in -0.9..0.9f64, dt in 1e-4..5e-2f64,
        ) {
            let y = DriftMatrix::from_matrix(Mat2::new(-(lambda - mu), omega, -omega, -(lambda + mu)));
            let d = ScaledDiffusion::from_matrix(Mat2::symmetric(0.6, 0.1, 0.4));
            let s = GaussianState { mean: [0.1, 0.2], sigma: Mat2::symmetric(s11, r * libm::sqrt(s11 * s22), s22) };
            let next = step_rk4(&s, &y, &d, dt).unwrap();
            prop_assert!(next.sigma.asymmetry() <= 1e-12);
        }
    }
}
