//! Spectral computation for the one-dimensional Klein-Gordon operator pencil
//! `T_V(λ) = -Δ + m² - (V-λ)²` with decaying potentials.
//!
//! The pencil's point spectrum is characterised by non-invertibility of
//! `I - K(λ)` for a compact Birman-Schwinger-type operator `K(λ)`. This crate
//! builds computable dense approximations `K_n(λ)` on an explicit Fourier-cell
//! basis, tracks certified operator-norm error constants for them, and locates
//! eigenvalues by searching for large values of `‖(I-K_n(λ))⁻¹‖`.
//!
//! Module map:
//! - [`potential`]: admissible potential class and the shipped benchmark wells
//! - [`symbols`]: the Fourier symbol `a_λ`, the effective potential `W_λ`, and
//!   their closed-form bounds
//! - [`disc`]: Fourier cell lattice, basis functions, parameter schedules
//! - [`assembly`]: quadrature rules and assembly of `K_n(λ)`
//! - [`constants`]: certified truncation/assembly/Lipschitz constants
//! - [`linalg`]: dense complex matrices and the smallest-singular-value kernel
//! - [`solver`]: search lattices, threshold sets, refinement, sweeps
//! - [`enclosures`]: a-priori eigenvalue enclosure regions
//! - [`oracle`]: exact square-well eigenvalues and reference assemblies
//! - [`config`]: CLI/config-file/CSV parsing for run configuration

pub mod assembly;
pub mod config;
pub mod constants;
pub mod czt;
pub mod disc;
pub mod enclosures;
pub mod linalg;
pub mod oracle;
pub mod potential;
pub mod quad;
pub mod solver;
pub mod symbols;

use num_complex::Complex64;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// `λ² ∈ [m², ∞)`: the spectral parameter sits on the essential-spectrum
    /// rays where `a_λ` is undefined.
    #[error("spectral parameter {lambda} lies on the essential spectrum rays")]
    EssentialSpectrum { lambda: Complex64 },
    #[error("matrix side {ln} exceeds the configured resource cap {cap}")]
    ResourceCap { ln: usize, cap: usize },
    #[error("potential fails the decay/regularity hypothesis{}", witness.map(|x| format!(" (witness x = {x})")).unwrap_or_default())]
    HypothesisFailed { witness: Option<f64> },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
