use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numkit::{ComplexMatrix, RealMatrix};
use crate::{Error, Result};

/// Real `2d x 2d` matrix of the real-linear map `z ↦ S1 z + S2 z̄`.
pub fn real_linear_to_matrix(s1: &ComplexMatrix, s2: &ComplexMatrix) -> Result<RealMatrix> {
    let d = s1.require_square()?;
    let d2 = s2.require_square()?;
    if d2 != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: d2,
        });
    }
    Ok(RealMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let (a, b) = (s1[(i % d, j % d)], s2[(i % d, j % d)]);
        match (i < d, j < d) {
            (true, true) => a.re + b.re,
            (true, false) => b.im - a.im,
            (false, true) => a.im + b.im,
            (false, false) => a.re - b.re,
        }
    }))
}

/// Inverse of [`real_linear_to_matrix`].
pub fn matrix_to_real_linear(m: &RealMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.require_square()?;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let d = n / 2;
    let block = |i: usize, j: usize, bi: usize, bj: usize| m[(bi * d + i, bj * d + j)];
    let s1 = ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(
            (block(i, j, 0, 0) + block(i, j, 1, 1)) / 2.0,
            (block(i, j, 1, 0) - block(i, j, 0, 1)) / 2.0,
        )
    });
    let s2 = ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(
            (block(i, j, 0, 0) - block(i, j, 1, 1)) / 2.0,
            (block(i, j, 0, 1) + block(i, j, 1, 0)) / 2.0,
        )
    });
    Ok((s1, s2))
}

/// `J = [[0, I], [-I, 0]]`, the matrix of multiplication by `-i`.
pub fn symplectic_form(d: usize) -> RealMatrix {
    RealMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if j == i + d {
            1.0
        } else if i == j + d {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn complex_to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter()
        .map(|c| c.re)
        .chain(z.iter().map(|c| c.im))
        .collect()
}

pub fn real_to_complex(x: &[f64]) -> Result<Vec<Complex64>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::OddDimension(x.len()));
    }
    let d = x.len() / 2;
    Ok((0..d).map(|k| Complex64::new(x[k], x[k + d])).collect())
}
