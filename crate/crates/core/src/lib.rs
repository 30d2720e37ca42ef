//! Exact spectral analysis of the photon-number-truncated field quadrature.
//!
//! The truncated quadrature operator on an `(N+1)`-dimensional Fock space is
//! tridiagonal with off-diagonal entries `√(n/2)`; its characteristic
//! polynomial is a rescaled Hermite polynomial, so every spectral question
//! reduces to Hermite-function arithmetic. The modules here follow that
//! reduction:
//!
//! - [`hermite`]: orthonormalized Hermite recurrences, scaled so no
//!   intermediate overflows, plus root finding and Gauss-Hermite weights.
//! - [`quadrature`]: the operator itself, its exact eigendecomposition, the
//!   finite-rank projector, and the minimal-polynomial checks.
//! - [`pseudo`]: pseudo-eigenstates at arbitrary real `λ`, the concentration
//!   measure `d_N(λ)` in several algebraically equivalent forms, moments, and
//!   the closed-form asymptotic approximants.
//! - [`cd`]: the Christoffel-Darboux kernel, the complex zero set of the
//!   concentration measure's denominator polynomial, and its exact Laurent
//!   data.
//! - [`limit`]: eigenvalue-proximity certificates showing the union of finite
//!   spectra fills out the real line, and the phase-circle analogue.
//! - [`validate`]: end-to-end consistency suites for the CLI.
//!
//! Scaled arithmetic ([`scaled::ScaledReal`]) carries Hermite magnitudes far
//! past the `f64` range; exact integer and rational arithmetic backs the
//! polynomial coefficient and Laurent computations.

pub mod aberth;
pub mod cd;
pub mod error;
pub mod hermite;
pub mod limit;
pub mod pseudo;
pub mod quadrature;
pub mod scaled;
pub mod validate;

pub use error::{Error, Result};
pub use scaled::ScaledReal;
