//! Gaussian (quasi-free) state dynamics for the damped harmonic oscillator
//! under a Lindblad semigroup, and selection of the initial states that
//! minimize linear-entropy production.
//!
//! Everything here works on 2×2 matrices and two-component vectors in the
//! scaled phase-space coordinates `x1 = √(mω)·q`, `x2 = p/√(mω)`. The crate is
//! `no_std` and only needs `alloc` for trajectories and grid tables.
//!
//! - [`model`]: physical constants, Lindblad-derived coefficients, drift and
//!   diffusion matrices, and the positivity check.
//! - [`dynamics`]: RK4 evolution of means and dispersion matrix, stationary
//!   covariance.
//! - [`entropy`]: area, linear entropy and their rates.
//! - [`decomposition`]: (area, squeezing, angle) form of SPD matrices.
//! - [`sieve`]: entropy-production rate over initial squeezing/orientation,
//!   its analytic minimizer and a grid-search cross-check.
//! - [`wigner`]: Gaussian Wigner function, quadrature and Fokker–Planck
//!   residuals.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod decomposition;
pub mod dynamics;
pub mod entropy;
mod error;
pub mod linalg;
pub mod model;
pub mod sieve;
pub mod wigner;

pub use error::{Error, Result};
pub use linalg::{Mat2, Vec2};
