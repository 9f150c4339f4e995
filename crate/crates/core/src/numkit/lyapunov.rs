//! Continuous Lyapunov equation `Z^T S + S Z + C = 0`.
//!
//! The equation is vectorised into an `n^2 x n^2` linear system. At the
//! sizes used here (n <= 16) a dense LU solve is exact enough and far
//! simpler than a Schur-based method.

use alloc::vec::Vec;

use super::{Lu, RealMatrix};
use crate::{Error, Result};

const MAX_DIM: usize = 16;
const REFINEMENT_STEPS: usize = 4;

/// Frobenius norm of `Z^T S + S Z + C`.
pub fn lyapunov_residual(z: &RealMatrix, s: &RealMatrix, c: &RealMatrix) -> f64 {
    let r = &(&(&z.transpose() * s) + &(s * z)) + c;
    r.frobenius_norm()
}

/// Solves `Z^T S + S Z + C = 0` for symmetric `S`.
///
/// Fails with [`Error::Singular`] when `Z` has eigenvalues summing to
/// zero (in particular when it is not stable enough to define `S`), and
/// with [`Error::LyapunovResidual`] if the result does not meet
/// `1e-10 * max(1, |C|_F)`.
pub fn solve_lyapunov(z: &RealMatrix, c: &RealMatrix) -> Result<RealMatrix> {
    let n = z.require_square()?;
    let nc = c.require_square()?;
    if nc != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nc,
        });
    }
    if n > MAX_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: MAX_DIM,
        });
    }
    if !z.is_finite() || !c.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = c.asymmetry();
    if asym > 1e-12 * c.frobenius_norm().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }

    // Row-major vec: S[i][j] -> i*n + j.
    let nn = n * n;
    let mut a = RealMatrix::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                a[(row, k * n + j)] += z[(k, i)];
                a[(row, i * n + k)] += z[(k, j)];
            }
        }
    }
    let lu = Lu::new(&a)?;
    let rhs: Vec<f64> = c.as_slice().iter().map(|x| -x).collect();
    let mut s = RealMatrix::from_vec(n, n, lu.solve(&rhs))?.symmetrize();

    // Iterative refinement on the matrix residual; large drifts need a
    // few rounds to reach the bound.
    let bound = 1e-10 * c.frobenius_norm().max(1.0);
    let mut residual = lyapunov_residual(z, &s, c);
    for _ in 0..REFINEMENT_STEPS {
        if residual <= 0.1 * bound {
            break;
        }
        let r = &(&(&z.transpose() * &s) + &(&s * z)) + c;
        let neg: Vec<f64> = r.as_slice().iter().map(|x| -x).collect();
        let ds = RealMatrix::from_vec(n, n, lu.solve(&neg))?;
        let next = (&s + &ds).symmetrize();
        let next_residual = lyapunov_residual(z, &next, c);
        if !(next_residual < residual) {
            break;
        }
        s = next;
        residual = next_residual;
    }
    if !(residual <= bound) {
        return Err(Error::LyapunovResidual { residual, bound });
    }
    Ok(s)
}
