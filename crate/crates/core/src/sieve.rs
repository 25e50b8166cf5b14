//! Entropy production of an initial Gaussian state as a function of its
//! squeezing ℵ and orientation θ, at fixed area `A`:
//!
//! ```text
//! ds/dt|₀ = (1/A)·{−2λ + (Δ/A)·[cos²(θ−φ)(ℵ²d⁻² + ℵ⁻²d²) + sin²(θ−φ)(ℵ²d² + ℵ⁻²d⁻²)]}
//! ```
//!
//! The minimum sits at `ℵ = d`, `θ = φ` with value `2(Δ − Aλ)/A²`. An
//! exhaustive grid search over (log ℵ, θ), followed by a bracketed local polish,
//! cross-checks the closed form without using it.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::decomposition::{canonical_squeezing, wrap_angle, DiffDecomposition};
use crate::{Error, Result};

/// Entropy production rate at `t = 0` of the state `(A, ℵ, θ)`.
pub fn rate_at(aleph: f64, theta: f64, area: f64, lambda: f64, diff: &DiffDecomposition) -> f64 {
    let a2 = aleph * aleph;
    let d2 = diff.d * diff.d;
    let c = libm::cos(theta - diff.phi);
    let s = libm::sin(theta - diff.phi);
    let aligned = a2 / d2 + d2 / a2;
    let crossed = a2 * d2 + 1.0 / (a2 * d2);
    let shape = c * c * aligned + s * s * crossed;
    (-2.0 * lambda + diff.delta / area * shape) / area
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticOptimum {
    pub aleph_star: f64,
    pub theta_star: f64,
    pub min_rate: f64,
    /// Isotropic diffusion (`d = 1`): the rate does not depend on θ.
    pub degenerate_angle: bool,
}

pub fn analytic_minimizer(area: f64, lambda: f64, diff: &DiffDecomposition) -> AnalyticOptimum {
    let degenerate_angle = diff.d == 1.0;
    AnalyticOptimum {
        aleph_star: diff.d,
        theta_star: if degenerate_angle { 0.0 } else { diff.phi },
        min_rate: 2.0 * (diff.delta - area * lambda) / (area * area),
        degenerate_angle,
    }
}

/// Log-spaced ℵ grid (both ends included) times uniform θ grid `k·π/n_theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_aleph: usize,
    pub n_theta: usize,
    pub aleph_lo: f64,
    pub aleph_hi: f64,
}

impl GridSpec {
    pub fn new(n_aleph: usize, n_theta: usize, aleph_lo: f64, aleph_hi: f64) -> Self {
        GridSpec { n_aleph, n_theta, aleph_lo, aleph_hi }
    }

    pub fn check(&self) -> Result<()> {
        if self.n_aleph < 3 || self.n_theta < 3 {
            return Err(Error::InvalidArgument("grid needs at least 3 points per axis"));
        }
        if !(self.aleph_lo > 0.0 && self.aleph_hi > self.aleph_lo && self.aleph_hi.is_finite()) {
            return Err(Error::InvalidArgument("squeezing range must satisfy 0 < lo < hi"));
        }
        Ok(())
    }

    /// Spacing of the ℵ grid in `ln ℵ`.
    pub fn log_step(&self) -> f64 {
        libm::log(self.aleph_hi / self.aleph_lo) / (self.n_aleph - 1) as f64
    }

    pub fn theta_step(&self) -> f64 {
        PI / self.n_theta as f64
    }

    pub fn aleph_values(&self) -> Vec<f64> {
        let (l0, h) = (libm::log(self.aleph_lo), self.log_step());
        (0..self.n_aleph)
            .map(|i| match i {
                0 => self.aleph_lo,
                i if i == self.n_aleph - 1 => self.aleph_hi,
                i => libm::exp(l0 + i as f64 * h),
            })
            .collect()
    }

    pub fn theta_values(&self) -> Vec<f64> {
        (0..self.n_theta).map(|j| j as f64 * self.theta_step()).collect()
    }
}

/// Argmin of an exhaustive grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub aleph_index: usize,
    pub theta_index: usize,
    /// Grid coordinates of the best cell, as evaluated.
    pub aleph: f64,
    pub theta: f64,
    pub rate: f64,
}

impl GridOptimum {
    /// Same state on the `ℵ ≥ 1`, `θ ∈ [0, π)` branch.
    pub fn canonical(&self) -> (f64, f64) {
        canonical_squeezing(self.aleph, self.theta)
    }
}

/// Exhaustive search over explicit ℵ and θ lists; ties go to the lowest
/// index (ℵ outer, θ inner).
pub fn grid_search_on(
    area: f64,
    lambda: f64,
    diff: &DiffDecomposition,
    alephs: &[f64],
    thetas: &[f64],
) -> Result<GridOptimum> {
    if alephs.is_empty() || thetas.is_empty() {
        return Err(Error::InvalidArgument("empty grid"));
    }
    let mut best = GridOptimum { aleph_index: 0, theta_index: 0, aleph: alephs[0], theta: thetas[0], rate: f64::INFINITY };
    for (i, &aleph) in alephs.iter().enumerate() {
        for (j, &theta) in thetas.iter().enumerate() {
            let rate = rate_at(aleph, theta, area, lambda, diff);
            if rate < best.rate {
                best = GridOptimum { aleph_index: i, theta_index: j, aleph, theta, rate };
            }
        }
    }
    Ok(best)
}

pub fn grid_search(area: f64, lambda: f64, diff: &DiffDecomposition, spec: &GridSpec) -> Result<GridOptimum> {
    spec.check()?;
    if !(spec.aleph_lo < diff.d && diff.d < spec.aleph_hi) {
        return Err(Error::Bracket { d: diff.d, lo: spec.aleph_lo, hi: spec.aleph_hi });
    }
    grid_search_on(area, lambda, diff, &spec.aleph_values(), &spec.theta_values())
}

/// Locally polished optimum, in canonical branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedOptimum {
    pub aleph: f64,
    pub theta: f64,
    pub rate: f64,
}

const GOLDEN_ITERATIONS: usize = 90;

fn golden_min(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Polishes a grid optimum by nested golden-section search over the cells
/// adjacent to it (one step either side in `ln ℵ` and in θ).
pub fn refine(
    area: f64,
    lambda: f64,
    diff: &DiffDecomposition,
    spec: &GridSpec,
    grid: &GridOptimum,
) -> RefinedOptimum {
    let (hu, ht) = (spec.log_step(), spec.theta_step());
    let u0 = libm::log(grid.aleph);
    let inner = |theta: f64| {
        golden_min(|u| rate_at(libm::exp(u), theta, area, lambda, diff), u0 - hu, u0 + hu)
    };
    let (theta, _) = golden_min(|t| inner(t).1, grid.theta - ht, grid.theta + ht);
    let (u, rate) = inner(theta);
    let (mut aleph, mut theta) = canonical_squeezing(libm::exp(u), theta);
    if rate > grid.rate {
        // the polish never does worse than the grid
        (aleph, theta) = grid.canonical();
        return RefinedOptimum { aleph, theta, rate: grid.rate };
    }
    if aleph == 1.0 {
        theta = wrap_angle(theta);
    }
    RefinedOptimum { aleph, theta, rate }
}

/// Analytic minimizer together with its grid cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveResult {
    pub analytic: AnalyticOptimum,
    pub grid: GridOptimum,
    pub refined: RefinedOptimum,
    pub spec: GridSpec,
}

impl SieveResult {
    /// Distance in grid steps between the canonical grid optimum and the
    /// analytic one: `(|Δ ln ℵ| / log_step, circular |Δθ| / θ_step)`.
    pub fn grid_offset_steps(&self) -> (f64, f64) {
        let (aleph, theta) = self.grid.canonical();
        let du = (libm::log(aleph) - libm::log(self.analytic.aleph_star)).abs() / self.spec.log_step();
        let dt = if self.analytic.degenerate_angle {
            0.0
        } else {
            angle_distance(theta, self.analytic.theta_star) / self.spec.theta_step()
        };
        (du, dt)
    }

    /// `rate_grid − min_rate` for the polished optimum.
    pub fn refined_excess(&self) -> f64 {
        self.refined.rate - self.analytic.min_rate
    }
}

/// Distance between two angles modulo π.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(PI - d)
}

pub fn sieve(area: f64, lambda: f64, diff: &DiffDecomposition, spec: &GridSpec) -> Result<SieveResult> {
    let analytic = analytic_minimizer(area, lambda, diff);
    let grid = grid_search(area, lambda, diff, spec)?;
    let refined = refine(area, lambda, diff, spec, &grid);
    Ok(SieveResult { analytic, grid, refined, spec: *spec })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapePoint {
    pub aleph: f64,
    pub theta: f64,
    pub rate: f64,
}

/// Full grid table, ℵ outer and θ inner.
pub fn rate_landscape(area: f64, lambda: f64, diff: &DiffDecomposition, spec: &GridSpec) -> Result<Vec<LandscapePoint>> {
    spec.check()?;
    let thetas = spec.theta_values();
    let mut out = Vec::with_capacity(spec.n_aleph * spec.n_theta);
    for aleph in spec.aleph_values() {
        out.extend(landscape_row(area, lambda, diff, aleph, &thetas));
    }
    Ok(out)
}

/// One ℵ row of [`rate_landscape`].
pub fn landscape_row<'a>(
    area: f64,
    lambda: f64,
    diff: &DiffDecomposition,
    aleph: f64,
    thetas: &'a [f64],
) -> impl Iterator<Item = LandscapePoint> + 'a {
    let diff = *diff;
    thetas.iter().map(move |&theta| LandscapePoint { aleph, theta, rate: rate_at(aleph, theta, area, lambda, &diff) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{compose, compose_diffusion, CovDecomposition};
    use crate::entropy::initial_rate;
    use proptest::prelude::*;

    fn diff(delta: f64, d: f64, phi: f64) -> DiffDecomposition {
        DiffDecomposition { delta, d, phi }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn rate_at_optimum() {
        let (area, lambda, df) = (1.7, 0.3, diff(1.2, 2.5, 0.4));
        let r = rate_at(2.5, 0.4, area, lambda, &df);
        assert!(rel(r, 2.0 * (1.2 - area * lambda) / (area * area)) < 1e-14);

        let r = rate_at(1.0, 0.9, 1.0, 0.3, &diff(1.2, 1.0, 0.0));
        assert!(rel(r, 2.0 * (1.2 - 0.3)) < 1e-14);
    }

    #[test]
    fn rate_grows_with_squeezing() {
        let df = diff(1.0, 2.0, 0.5);
        let r1 = rate_at(1e3, 0.5, 1.0, 0.2, &df);
        let r2 = rate_at(2e3, 0.5, 1.0, 0.2, &df);
        assert!(r2 > 3.9 * r1 && r1 > 1e4);
    }

    #[test]
    fn analytic_examples() {
        let opt = analytic_minimizer(1.0, 0.2, &diff(1.0, 1.0, 2.0));
        assert_eq!(opt.aleph_star, 1.0);
        assert_eq!(opt.theta_star, 0.0);
        assert!(opt.degenerate_angle);

        let opt = analytic_minimizer(1.0, 0.5, &diff(1.0, 2.0, 0.3));
        assert_eq!((opt.aleph_star, opt.theta_star, opt.min_rate), (2.0, 0.3, 1.0));
        assert!(!opt.degenerate_angle);

        assert_eq!(analytic_minimizer(1.0, 0.8, &diff(0.8, 1.5, 0.3)).min_rate, 0.0);
    }

    #[test]
    fn grid_isotropic() {
        let spec = GridSpec::new(101, 91, 0.5, 2.0);
        let g = grid_search(1.0, 0.1, &diff(1.0, 1.0, 0.0), &spec).unwrap();
        assert!(libm::log(g.aleph).abs() <= spec.log_step() + 1e-12);
    }

    #[test]
    fn grid_anisotropic() {
        let spec = GridSpec::new(401, 361, 0.5, 8.0);
        let res = sieve(1.0, 0.4, &diff(1.0, 2.0, 1.0), &spec).unwrap();
        let (du, dt) = res.grid_offset_steps();
        assert!(du <= 1.0 && dt <= 1.0, "{du} {dt}");
        assert!(res.refined_excess() >= -1e-12);
        assert!(res.refined_excess() <= 1e-10);
    }

    #[test]
    fn single_point_grid_hits_minimum() {
        let (area, lambda, df) = (2.0, 0.1, diff(1.5, 3.0, 2.2));
        let g = grid_search_on(area, lambda, &df, &[3.0], &[2.2]).unwrap();
        assert_eq!(g.rate, analytic_minimizer(area, lambda, &df).min_rate);
    }

    #[test]
    fn grid_errors() {
        let df = diff(1.0, 10.0, 0.0);
        assert!(matches!(grid_search(1.0, 0.0, &df, &GridSpec::new(11, 11, 0.5, 8.0)), Err(Error::Bracket { .. })));
        assert!(matches!(grid_search(1.0, 0.0, &df, &GridSpec::new(2, 11, 0.5, 20.0)), Err(Error::InvalidArgument(_))));
        assert!(matches!(grid_search(1.0, 0.0, &df, &GridSpec::new(11, 11, 20.0, 0.5)), Err(Error::InvalidArgument(_))));
        assert!(grid_search_on(1.0, 0.0, &df, &[], &[0.0]).is_err());
    }

    #[test]
    fn grid_axes() {
        let spec = GridSpec::new(5, 4, 0.5, 8.0);
        let a = spec.aleph_values();
        assert_eq!(a.len(), 5);
        assert_eq!((a[0], a[4]), (0.5, 8.0));
        assert!((a[2] - 2.0).abs() < 1e-15);
        assert_eq!(spec.theta_values(), [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0]);
    }

    #[test]
    fn landscape_layout_and_values() {
        let spec = GridSpec::new(4, 3, 0.5, 4.0);
        let (area, lambda, df) = (1.0, 0.2, diff(1.0, 2.0, PI / 3.0));
        let table = rate_landscape(area, lambda, &df, &spec).unwrap();
        assert_eq!(table.len(), 12);
        assert_eq!(table[0].theta, 0.0);
        assert_eq!(table[1].aleph, table[0].aleph);
        assert_eq!(table[3].theta, 0.0);
        assert!(table[3].aleph > table[0].aleph);
        // (ℵ = 2, θ = π/3) is on this grid
        let hit = table.iter().find(|p| (p.aleph - 2.0).abs() < 1e-12 && (p.theta - PI / 3.0).abs() < 1e-12).unwrap();
        assert!(rel(hit.rate, analytic_minimizer(area, lambda, &df).min_rate) < 1e-13);

        let flat = rate_landscape(2.0, 0.2, &diff(0.0, 2.0, 0.1), &spec).unwrap();
        assert!(flat.iter().all(|p| (p.rate + 0.2).abs() < 1e-15));

        let iso = rate_landscape(1.0, 0.2, &diff(1.0, 1.0, 0.0), &spec).unwrap();
        for row in iso.chunks(3) {
            assert!(row.iter().all(|p| rel(p.rate, row[0].rate) < 1e-12));
        }
    }

    fn tuple() -> impl Strategy<Value = (f64, f64, f64, f64, DiffDecomposition)> {
        (0.1..6.0f64, 0.0..PI, 1.0..10.0f64, -1.0..1.0f64, 0.01..5.0f64, 1.0..5.0f64, 0.0..PI)
            .prop_map(|(aleph, theta, area, lambda, delta, d, phi)| (aleph, theta, area, lambda, diff(delta, d, phi)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn matches_entropy_module((aleph, theta, area, lambda, df) in tuple()) {
            let hbar = 0.9;
            let sigma = compose(&CovDecomposition { area, aleph, theta }, hbar);
            let d = compose_diffusion(&df, hbar);
            let want = initial_rate(&sigma, &d, lambda, hbar).unwrap();
            let got = rate_at(aleph, theta, area, lambda, &df);
            // relative to the sum of term magnitudes, which bounds cancellation
            let (a2, d2) = (aleph * aleph, df.d * df.d);
            let magnitude = df.delta / (area * area) * (a2 + 1.0 / a2) * (d2 + 1.0 / d2) + 2.0 * lambda.abs() / area;
            prop_assert!((got - want).abs() <= 1e-12 * magnitude);
        }

        #[test]
        fn analytic_point_is_global_minimum((aleph, theta, area, lambda, df) in tuple()) {
            let min = analytic_minimizer(area, lambda, &df).min_rate;
            prop_assert!(rate_at(aleph, theta, area, lambda, &df) >= min - 1e-12 * min.abs().max(1.0));
        }

        #[test]
        fn angle_shift_equivariance(area in 1.0..5.0f64, delta in 0.1..3.0f64, d in 1.2..4.0f64,
                                    phi in 0.0..PI, shift in 0.0..PI) {
            let a = analytic_minimizer(area, 0.1, &diff(delta, d, phi));
            let b = analytic_minimizer(area, 0.1, &diff(delta, d, wrap_angle(phi + shift)));
            prop_assert!(angle_distance(b.theta_star, a.theta_star + shift) < 1e-12);
            prop_assert!(rel(a.min_rate, b.min_rate) < 1e-12);
            let probe = rate_at(1.3, 0.2, area, 0.1, &diff(delta, d, phi));
            let shifted = rate_at(1.3, 0.2 + shift, area, 0.1, &diff(delta, d, phi + shift));
            prop_assert!(rel(probe, shifted) < 1e-12);
        }

        #[test]
        fn pure_state_minimum_nonnegative(delta in 0.0..5.0f64, frac in 0.0..1.0f64, d in 1.0..5.0f64, phi in 0.0..PI) {
            let lambda = frac * delta;
            prop_assert!(analytic_minimizer(1.0, lambda, &diff(delta, d, phi)).min_rate >= 0.0);
        }
    }
}
