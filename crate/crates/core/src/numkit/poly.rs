//! Roots of low-degree real polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{eigenvalues, RealMatrix};
use crate::{Error, Result};

/// Horner evaluation; coefficients are highest power first.
pub fn polyval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All complex roots of a real polynomial of degree 1 to 4, coefficients
/// highest power first.
///
/// Degrees 1 and 2 use closed forms; degrees 3 and 4 take the eigenvalues
/// of the companion matrix and polish each with a few Newton steps.
pub fn polynomial_roots_real_coeffs(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let Some((&lead, rest)) = coeffs.split_first() else {
        return Err(Error::UnsupportedDegree(0));
    };
    let degree = rest.len();
    if degree == 0 || degree > 4 {
        return Err(Error::UnsupportedDegree(degree));
    }
    if lead == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    match degree {
        1 => Ok(vec![Complex64::new(-monic[1], 0.0)]),
        2 => Ok(quadratic(monic[1], monic[2]).to_vec()),
        _ => {
            let companion = RealMatrix::from_fn(degree, degree, |i, j| {
                if i == 0 {
                    -monic[j + 1]
                } else if i == j + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            let spectrum = eigenvalues(&companion)?;
            Ok(spectrum
                .eigenvalues
                .into_iter()
                .map(|z| newton_polish(&monic, z))
                .collect())
        }
    }
}

// Roots of λ² + bλ + c without cancellation.
fn quadratic(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = libm::sqrt(disc);
        let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let im = 0.5 * libm::sqrt(-disc);
        [Complex64::new(-0.5 * b, im), Complex64::new(-0.5 * b, -im)]
    }
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (n - i) as f64)
        .collect()
}

fn newton_polish(monic: &[f64], mut z: Complex64) -> Complex64 {
    let d = derivative(monic);
    let mut best = polyval(monic, z).norm();
    for _ in 0..4 {
        let dp = polyval(&d, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - polyval(monic, z) / dp;
        let r = polyval(monic, next).norm();
        if !(r < best) {
            break;
        }
        best = r;
        z = next;
    }
    z
}

/// Simultaneous (Weierstrass) iteration for all roots; used as a fallback
/// when the QR iteration stalls. Returns `None` if it fails to settle.
pub(crate) fn durand_kerner(coeffs: &[f64], max_iter: usize) -> Option<Vec<Complex64>> {
    let lead = *coeffs.first()?;
    if lead == 0.0 {
        return None;
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let n = monic.len() - 1;
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    // Points spread on a circle of the Cauchy radius, off the real axis.
    let seed = Complex64::new(0.4, 0.9);
    let unit = seed / seed.norm();
    let mut z: Vec<Complex64> = (0..n).map(|k| unit.powu(k as u32 + 1) * radius).collect();
    for _ in 0..max_iter {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = polyval(&monic, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta <= 1e-15 * radius {
            return Some(z);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_real_roots() {
        let mut r = polynomial_roots_real_coeffs(&[1.0, 0.0, -1.0]).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0].re + 1.0).abs() < 1e-15 && (r[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_leading_coefficient() {
        assert_eq!(
            polynomial_roots_real_coeffs(&[0.0, 1.0, 1.0]),
            Err(Error::ZeroLeadingCoefficient)
        );
        assert_eq!(
            polynomial_roots_real_coeffs(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
            Err(Error::UnsupportedDegree(5))
        );
    }

    #[test]
    fn cubic_roots_are_roots() {
        // (λ + 1/2)(λ² + 1/4)
        let c = [1.0, 0.5, 0.25, 0.125];
        let mut r = polynomial_roots_real_coeffs(&c).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        let want = [
            Complex64::new(0.0, -0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.5),
        ];
        for (z, w) in r.iter().zip(want) {
            assert!((z - w).norm() < 1e-12);
            assert!(polyval(&c, *z).norm() < 1e-12);
        }
    }

    #[test]
    fn durand_kerner_quartic() {
        let c = [1.0, 1.0, 0.75, 0.25, 0.0625];
        let r = durand_kerner(&c, 500).unwrap();
        for z in r {
            assert!(polyval(&c, z).norm() < 1e-12);
        }
    }
}
