//! Dense linear algebra for the small matrices (at most 16x16, typically
//! 6x6 or 8x8) that describe few-mode Gaussian systems.
//!
//! Everything here is written for clarity at this scale rather than for
//! asymptotic performance: the Lyapunov solver vectorises into a
//! `n^2 x n^2` linear system, the Hermitian eigensolver runs cyclic Jacobi
//! on a real embedding, and so on.

mod eigen;
mod expm;
mod hermitian;
mod lu;
mod lyapunov;
mod matrix;
mod poly;
mod quadrature;

pub use eigen::{
    characteristic_polynomial, eigenvalues, eigenvalues_general, Spectrum, Stability,
    STABILITY_BAND,
};
pub use expm::expm;
pub use hermitian::{
    hermitian_eigenvalues, hermitian_min_eigenvalue, psd_by_pivoted_cholesky, psd_tolerance,
    symmetric_eigenvalues,
};
pub use lu::Lu;
pub use lyapunov::{lyapunov_residual, solve_lyapunov};
pub use matrix::{ComplexMatrix, RealMatrix};
pub use poly::{polynomial_roots_real_coeffs, polyval};
pub use quadrature::{
    finite_gramian, integrated_propagator, simpson_steps, stationary_integral_oracle,
    QUADRATURE_MAX_HORIZON, QUADRATURE_STEP,
};

/// Maximum dimension accepted by the general eigenvalue routine.
pub const MAX_EIG_DIM: usize = 16;
