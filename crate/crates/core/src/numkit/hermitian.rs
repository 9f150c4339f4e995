//! Eigenvalues of real symmetric and complex Hermitian matrices, and
//! positive-semidefiniteness tests.
//!
//! A Hermitian `H = A + iB` is handled through the real symmetric
//! embedding `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every
//! eigenvalue doubled.

use alloc::vec::Vec;

use super::{ComplexMatrix, RealMatrix};
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Threshold below which a minimum eigenvalue counts as negative:
/// `1e-9 * max(1, norm)`.
pub fn psd_tolerance(norm: f64) -> f64 {
    1e-9 * norm.max(1.0)
}

/// Eigenvalues of a real symmetric matrix in ascending order (cyclic
/// Jacobi).
pub fn symmetric_eigenvalues(m: &RealMatrix) -> Result<Vec<f64>> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = m.frobenius_norm();
    let asym = m.asymmetry();
    if asym > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let mut a = m.symmetrize();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off <= (f64::EPSILON * norm) * (f64::EPSILON * norm) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = {
                    let s = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -s
                    } else {
                        s
                    }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    Ok(eig)
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    h.require_square()?;
    if h.max_abs().is_nan() || !h.max_abs().is_finite() {
        return Err(Error::NonFinite);
    }
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in ascending order, with
/// multiplicity.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let doubled = symmetric_eigenvalues(&h.real_embedding().symmetrize())?;
    Ok(doubled.into_iter().step_by(2).collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(h)?;
    Ok(eig.first().copied().unwrap_or(0.0))
}

/// PSD decision by pivoted Cholesky on the real embedding, with the same
/// tolerance as the eigenvalue test. Used as an independent consistency
/// check of [`hermitian_min_eigenvalue`].
pub fn psd_by_pivoted_cholesky(h: &ComplexMatrix) -> Result<bool> {
    check_hermitian(h)?;
    let tol = psd_tolerance(h.frobenius_norm());
    let mut a = h.real_embedding().symmetrize();
    let n = a.rows();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| a[(*x.1, *x.1)].partial_cmp(&a[(*y.1, *y.1)]).unwrap())
            .unwrap();
        let d = a[(p, p)];
        if d < -tol {
            return Ok(false);
        }
        if d <= tol {
            // Remaining Schur complement must vanish to tolerance.
            let rest = active
                .iter()
                .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                .all(|(i, j)| a[(i, j)].abs() <= tol);
            return Ok(rest);
        }
        active.swap_remove(pos);
        for &i in &active {
            let f = a[(i, p)] / d;
            for &j in &active {
                a[(i, j)] -= f * a[(p, j)];
            }
        }
    }
    Ok(true)
}
