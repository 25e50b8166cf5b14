//! Physical model: oscillator constants, Lindblad-derived diffusion and
//! friction coefficients, the drift matrix `Y` and scaled diffusion matrix `𝒟`.

use num_complex::Complex64;

use crate::decomposition::{compose_diffusion, DiffDecomposition};
use crate::linalg::Mat2;

/// Coefficients of the two Lindblad operators `V_j = a_j p + b_j q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladCouplings {
    /// `(a_j, b_j)` for `j = 1, 2`.
    pub pairs: [(Complex64, Complex64); 2],
}

impl LindbladCouplings {
    pub fn new(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> Self {
        LindbladCouplings { pairs: [(a1, b1), (a2, b2)] }
    }
}

/// Diffusion coefficients and friction constant produced by a coupling set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub d_qq: f64,
    pub d_pp: f64,
    pub d_pq: f64,
    pub lambda: f64,
}

impl Coefficients {
    /// `D_pp·D_qq − D_pq² − λ²ħ²/4`.
    pub fn positivity_slack(&self, hbar: f64) -> f64 {
        self.d_pp * self.d_qq - self.d_pq * self.d_pq - 0.25 * self.lambda * self.lambda * hbar * hbar
    }
}

/// Diffusion coefficients and friction from the Lindblad couplings.
///
/// The result satisfies `D_pp·D_qq − D_pq² ≥ λ²ħ²/4` by Cauchy–Schwarz.
pub fn derive_coefficients(couplings: &LindbladCouplings, hbar: f64) -> Coefficients {
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut cross = Complex64::new(0.0, 0.0);
    for &(a, b) in &couplings.pairs {
        sum_a += a.norm_sqr();
        sum_b += b.norm_sqr();
        cross += a.conj() * b;
    }
    let out = Coefficients {
        d_qq: 0.5 * hbar * sum_a,
        d_pp: 0.5 * hbar * sum_b,
        d_pq: -0.5 * hbar * cross.re,
        lambda: -cross.im,
    };
    debug_assert!(out.positivity_slack(hbar) >= -1e-12 * (1.0 + (out.d_pp * out.d_qq).abs()));
    out
}

/// Oscillator constants together with the diffusion/friction coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub mass: f64,
    pub omega: f64,
    /// Coefficient of the mixed `(pq + qp)/2` term of the Hamiltonian.
    pub mu: f64,
    pub hbar: f64,
    pub d_qq: f64,
    pub d_pp: f64,
    pub d_pq: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn from_couplings(
        mass: f64,
        omega: f64,
        mu: f64,
        hbar: f64,
        couplings: &LindbladCouplings,
    ) -> Self {
        let c = derive_coefficients(couplings, hbar);
        ModelParams { mass, omega, mu, hbar, d_qq: c.d_qq, d_pp: c.d_pp, d_pq: c.d_pq, lambda: c.lambda }
    }

    /// Builds the model from the scaled diffusion matrix, undoing the `mω` scaling.
    pub fn from_scaled_diffusion(
        mass: f64,
        omega: f64,
        mu: f64,
        hbar: f64,
        lambda: f64,
        diffusion: &ScaledDiffusion,
    ) -> Self {
        let m_omega = mass * omega;
        let d = diffusion.matrix();
        ModelParams {
            mass,
            omega,
            mu,
            hbar,
            d_qq: d.get(0, 0) / m_omega,
            d_pp: d.get(1, 1) * m_omega,
            d_pq: d.get(0, 1),
            lambda,
        }
    }

    /// Builds the model from the (intensity, anisotropy, angle) form of `𝒟`.
    pub fn from_decomposed_diffusion(
        mass: f64,
        omega: f64,
        mu: f64,
        hbar: f64,
        lambda: f64,
        diffusion: &DiffDecomposition,
    ) -> Self {
        let d = compose_diffusion(diffusion, hbar);
        Self::from_scaled_diffusion(mass, omega, mu, hbar, lambda, &d)
    }

    pub fn coefficients(&self) -> Coefficients {
        Coefficients { d_qq: self.d_qq, d_pp: self.d_pp, d_pq: self.d_pq, lambda: self.lambda }
    }

    pub fn positivity_slack(&self) -> f64 {
        self.coefficients().positivity_slack(self.hbar)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn drift(&self) -> DriftMatrix {
        build_drift(self)
    }

    pub fn scaled_diffusion(&self) -> ScaledDiffusion {
        build_scaled_diffusion(self)
    }
}

/// Outcome of [`validate`]. Failures are reported, never raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// `m`, `ω`, `ħ` strictly positive and every field finite.
    pub constants_ok: bool,
    pub d_qq_nonnegative: bool,
    pub d_pp_nonnegative: bool,
    /// `D_pp·D_qq − D_pq² ≥ λ²ħ²/4` up to [`ValidationReport::tolerance`].
    pub positivity_ok: bool,
    pub positivity_slack: f64,
    pub tolerance: f64,
    /// Warning only: `λ < 0`.
    pub anti_damped: bool,
    pub drift_eigenvalues: [Complex64; 2],
    pub drift_hurwitz: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.constants_ok && self.d_qq_nonnegative && self.d_pp_nonnegative && self.positivity_ok
    }
}

/// Absolute tolerance used for the positivity constraint.
pub fn positivity_tolerance(params: &ModelParams) -> f64 {
    1e-10 * (params.d_pp * params.d_qq).abs().max(1.0)
}

pub fn validate(params: &ModelParams) -> ValidationReport {
    let p = params;
    let finite = [p.mass, p.omega, p.mu, p.hbar, p.d_qq, p.d_pp, p.d_pq, p.lambda]
        .iter()
        .all(|x| x.is_finite());
    let constants_ok = finite && p.mass > 0.0 && p.omega > 0.0 && p.hbar > 0.0;
    let slack = p.positivity_slack();
    let tolerance = positivity_tolerance(p);
    let drift = build_drift(p);
    ValidationReport {
        constants_ok,
        d_qq_nonnegative: p.d_qq >= 0.0,
        d_pp_nonnegative: p.d_pp >= 0.0,
        positivity_ok: slack >= -tolerance,
        positivity_slack: slack,
        tolerance,
        anti_damped: p.lambda < 0.0,
        drift_eigenvalues: drift.eigenvalues(),
        drift_hurwitz: drift.is_hurwitz(),
    }
}

/// Drift matrix `Y = [[−(λ−μ), ω], [−ω, −(λ+μ)]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Mat2);

impl DriftMatrix {
    /// Wraps an arbitrary matrix, for synthetic experiments.
    pub fn from_matrix(m: Mat2) -> Self {
        DriftMatrix(m)
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let half_tr = 0.5 * self.0.trace();
        let disc = Complex64::new(half_tr * half_tr - self.0.det(), 0.0);
        let root = if disc.re >= 0.0 {
            Complex64::new(libm::sqrt(disc.re), 0.0)
        } else {
            Complex64::new(0.0, libm::sqrt(-disc.re))
        };
        [Complex64::new(half_tr, 0.0) + root, Complex64::new(half_tr, 0.0) - root]
    }

    /// Both eigenvalues in the open left half-plane.
    pub fn is_hurwitz(&self) -> bool {
        self.0.trace() < 0.0 && self.0.det() > 0.0
    }
}

pub fn build_drift(params: &ModelParams) -> DriftMatrix {
    let ModelParams { omega, mu, lambda, .. } = *params;
    DriftMatrix(Mat2::new(-(lambda - mu), omega, -omega, -(lambda + mu)))
}

/// Symmetric diffusion matrix in scaled coordinates:
/// `𝒟 = [[mω·D_qq, D_pq], [D_pq, D_pp/(mω)]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDiffusion(Mat2);

impl ScaledDiffusion {
    /// Wraps a matrix; only the symmetric part is kept.
    pub fn from_matrix(m: Mat2) -> Self {
        ScaledDiffusion(m.symmetrize())
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }
}

pub fn build_scaled_diffusion(params: &ModelParams) -> ScaledDiffusion {
    let m_omega = params.mass * params.omega;
    ScaledDiffusion(Mat2::symmetric(
        m_omega * params.d_qq,
        params.d_pq,
        params.d_pp / m_omega,
    ))
}
