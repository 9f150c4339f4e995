//! Gaussian GKLS generators and the states they act on.
//!
//! A generator with Hamiltonian matrices `(Ω, K)`, noise coefficients
//! `(U, V)` and linear drive `ζ` acts on Gaussian states through a real
//! drift/diffusion pair `(Z, C)` on phase space `R^{2d}`:
//!
//! ```text
//! S_t = e^{tZ^T} S e^{tZ} + ∫_0^t e^{sZ^T} C e^{sZ} ds
//! ```
//!
//! A complex vector `z ∈ C^d` is represented by `[Re z | Im z]`, which makes
//! `Re<z, w>` the Euclidean product and the adjoint `Z♯` the transpose.

mod convert;
mod covariance;
mod dynamics;
mod generator;

pub use convert::{
    complex_to_real, matrix_to_real_linear, real_linear_to_matrix, real_to_complex, symplectic_form,
};
pub use covariance::{is_valid_covariance, CovarianceMatrix, GaussianState, ValidityReport};
pub use dynamics::{
    evolve_state, stationary_covariance, weyl_ccr_phase, weyl_evolution_factor, WeylFactor,
};
pub use generator::{build_drift_diffusion, DriftDiffusion, GklsGenerator};
