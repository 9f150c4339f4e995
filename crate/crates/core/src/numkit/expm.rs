//! Matrix exponential by scaling and squaring with a diagonal Padé
//! approximant of order (6, 6).

use super::{Lu, RealMatrix};
use crate::Result;

// c_k = (2q-k)! q! / ((2q)! k! (q-k)!) for q = 6.
const PADE6: [f64; 7] = [
    1.0,
    0.5,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

// The approximant is applied once the 1-norm is at most this.
const SCALED_NORM: f64 = 0.5;

/// `e^M` for a square real matrix.
pub fn expm(m: &RealMatrix) -> Result<RealMatrix> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(crate::Error::NonFinite);
    }
    let norm = m.one_norm();
    let mut s = 0i32;
    if norm > SCALED_NORM {
        s = libm::ceil(libm::log2(norm / SCALED_NORM)) as i32;
    }
    let a = m.scale(libm::exp2(-(s as f64)));

    let mut num = RealMatrix::identity(n);
    let mut den = RealMatrix::identity(n);
    let mut power = RealMatrix::identity(n);
    for (k, &c) in PADE6.iter().enumerate().skip(1) {
        power = &power * &a;
        let term = power.scale(c);
        num = &num + &term;
        den = if k % 2 == 0 {
            &den + &term
        } else {
            &den - &term
        };
    }
    let mut e = Lu::new(&den)?.solve_matrix(&num);
    for _ in 0..s {
        e = &e * &e;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gives_identity() {
        let e = expm(&RealMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.max_abs_diff(&RealMatrix::identity(3)), 0.0);
    }

    #[test]
    fn diagonal() {
        let e = expm(&RealMatrix::from_diag(&[1.0, -3.0, 10.0])).unwrap();
        let want = [libm::exp(1.0), libm::exp(-3.0), libm::exp(10.0)];
        for (i, w) in want.iter().enumerate() {
            assert!((e[(i, i)] - w).abs() <= 1e-13 * w);
        }
    }

    #[test]
    fn rotation() {
        let t = 2.5;
        let e = expm(&RealMatrix::from_rows(&[[0.0, t], [-t, 0.0]]).unwrap()).unwrap();
        let want =
            RealMatrix::from_rows(&[[libm::cos(t), libm::sin(t)], [-libm::sin(t), libm::cos(t)]])
                .unwrap();
        assert!(e.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        let m = RealMatrix::from_rows(&[[0.0, 40.0], [0.0, 0.0]]).unwrap();
        let e = expm(&m).unwrap();
        assert!((e[(0, 1)] - 40.0).abs() < 1e-12);
        assert!((e[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_square_rejected() {
        assert!(expm(&RealMatrix::zeros(2, 3)).is_err());
    }
}
