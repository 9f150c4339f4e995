//! Gaussian quantum Markov semigroups on a finite number of bosonic modes.
//!
//! The crate covers the full path from a Gaussian GKLS generator to an
//! entanglement verdict:
//!
//! - [`numkit`]: a small dense linear-algebra kernel (eigenvalues, matrix
//!   exponential, Lyapunov solver, Hermitian PSD tests, quadrature).
//! - [`gaussian`]: generators, the real drift/diffusion pair `(Z, C)`,
//!   covariance matrices, time evolution and the Weyl-operator factor.
//! - [`entanglement`]: reduction to two modes and the PPT test with
//!   determinant and logarithmic-negativity witnesses.
//! - [`models`]: the one-reservoir (3-mode) and two-reservoir (4-mode)
//!   squeezed-pair systems, their closed forms and analytic regions.
//!
//! Covariance matrices use the `[p_1 .. p_d | q_1 .. q_d]` block ordering
//! and the convention in which the vacuum has covariance `I`, so a real
//! symmetric `S` is a valid covariance iff `S - iJ >= 0`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN fails the check; index
// loops read more naturally in the dense kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod gaussian;
pub mod models;
pub mod numkit;

pub use error::{Error, Result};
pub use num_complex::Complex64;
