//! Eigenvalues of small non-symmetric real matrices.
//!
//! The matrix is balanced, reduced to upper Hessenberg form with
//! Householder reflections, then driven to quasi-triangular form by the
//! Francis double-shift QR iteration. Dimension 4 and below fall back to
//! characteristic-polynomial root finding if the iteration stalls.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::poly::durand_kerner;
use super::{RealMatrix, MAX_EIG_DIM};
use crate::{Error, Result};

/// Half-width of the band around zero in which the largest real part is
/// treated as neither stable nor unstable.
pub const STABILITY_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// Largest real part within [`STABILITY_BAND`] of zero.
    Marginal,
    Unstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
}

impl Spectrum {
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn stability(&self) -> Stability {
        let m = self.max_real_part();
        if m < -STABILITY_BAND {
            Stability::Stable
        } else if m > STABILITY_BAND {
            Stability::Unstable
        } else {
            Stability::Marginal
        }
    }

    /// Eigenvalues sorted by real part, then imaginary part.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(
                    a.im.partial_cmp(&b.im)
                        .unwrap_or(core::cmp::Ordering::Equal),
                )
        });
        v
    }
}

/// Eigenvalues with default settings (machine-precision deflation,
/// `30 n` QR sweeps).
pub fn eigenvalues(m: &RealMatrix) -> Result<Spectrum> {
    eigenvalues_general(m, f64::EPSILON, 30 * m.rows().max(1))
}

/// All eigenvalues of a square real matrix of dimension at most 16.
///
/// `tol` is the relative size below which a subdiagonal entry is
/// deflated (clamped to machine epsilon); `max_iter` bounds the total
/// number of QR sweeps.
pub fn eigenvalues_general(m: &RealMatrix, tol: f64, max_iter: usize) -> Result<Spectrum> {
    let n = m.require_square()?;
    if n > MAX_EIG_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: MAX_EIG_DIM,
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            converged: true,
            iterations: 0,
        });
    }

    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    balance(&mut a);
    hessenberg(&mut a);
    match hqr(&mut a, tol.max(f64::EPSILON), max_iter) {
        Ok((eig, its)) => Ok(Spectrum {
            eigenvalues: eig,
            converged: true,
            iterations: its,
        }),
        Err(its) if n <= 4 => {
            let coeffs = characteristic_polynomial(m)?;
            let roots = durand_kerner(&coeffs, 500).ok_or(Error::NoConvergence(its))?;
            Ok(Spectrum {
                eigenvalues: roots,
                converged: true,
                iterations: its,
            })
        }
        Err(its) => Err(Error::NoConvergence(its)),
    }
}

/// Coefficients of `det(λI - M)`, highest power first (leading 1), by the
/// Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &RealMatrix) -> Result<Vec<f64>> {
    let n = m.require_square()?;
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut mk = RealMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += coeffs[k - 1];
        }
        let am = m * &next;
        coeffs[k] = -am.trace() / k as f64;
        mk = next;
    }
    Ok(coeffs)
}

fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= ginv;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = libm::sqrt((k + 1..n).map(|i| a[i][k] * a[i][k]).sum());
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k + 1][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm: f64 = libm::sqrt(v.iter().map(|x| x * x).sum());
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= vnorm;
        }
        // A <- H A, rows k+1..n
        for j in 0..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi * a[k + 1 + t][j])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                a[k + 1 + t][j] -= 2.0 * vi * dot;
            }
        }
        // A <- A H, columns k+1..n
        for row in a.iter_mut() {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi * row[k + 1 + t])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                row[k + 1 + t] -= 2.0 * vi * dot;
            }
        }
        a[k + 1][k] = alpha;
        for row in a.iter_mut().skip(k + 2) {
            row[k] = 0.0;
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. On failure the
/// number of sweeps spent is returned.
fn hqr(
    a: &mut [Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> core::result::Result<(Vec<Complex64>, usize), usize> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let mut total = 0usize;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut its = 0usize;
    while nn >= 0 {
        let nu = nn as usize;
        // Find a negligible subdiagonal element.
        let mut l = nu;
        while l >= 1 {
            let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
            if s == 0.0 {
                s = anorm;
            }
            if a[l][l - 1].abs() <= tol * s {
                a[l][l - 1] = 0.0;
                break;
            }
            l -= 1;
        }
        let mut x = a[nu][nu];
        if l == nu {
            wr[nu] = x + t;
            wi[nu] = 0.0;
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = a[nu - 1][nu - 1];
        let mut w = a[nu][nu - 1] * a[nu - 1][nu];
        if l == nu - 1 {
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let z = libm::sqrt(q.abs());
            x += t;
            if q >= 0.0 {
                let z = p + sign(z, p);
                wr[nu - 1] = x + z;
                wr[nu] = wr[nu - 1];
                if z != 0.0 {
                    wr[nu] = x - w / z;
                }
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = -z;
                wi[nu] = z;
            }
            nn -= 2;
            its = 0;
            continue;
        }

        if total >= max_iter {
            return Err(total);
        }
        if its == 10 || its == 20 {
            t += x;
            for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                row[i] -= x;
            }
            let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;
        total += 1;

        // Look for two consecutive small subdiagonal elements.
        let mut m = nu - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = a[m][m];
            let rr = x - z;
            let ss = y - z;
            p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
            q = a[m + 1][m + 1] - z - rr - ss;
            r = a[m + 2][m + 1];
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = a[m][m - 1].abs() * (q.abs() + r.abs());
            let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
            if u <= tol * v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=nu {
            a[i][i - 2] = 0.0;
            if i != m + 2 {
                a[i][i - 3] = 0.0;
            }
        }
        // Double QR step on rows l..=nu and columns m..=nu.
        let mut k = m;
        while k < nu {
            if k != m {
                p = a[k][k - 1];
                q = a[k + 1][k - 1];
                r = if k != nu - 1 { a[k + 2][k - 1] } else { 0.0 };
                x = p.abs() + q.abs() + r.abs();
                if x != 0.0 {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            let s = sign(libm::sqrt(p * p + q * q + r * r), p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        a[k][k - 1] = -a[k][k - 1];
                    }
                } else {
                    a[k][k - 1] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[k][j] + q * a[k + 1][j];
                    if k != nu - 1 {
                        pp += r * a[k + 2][j];
                        a[k + 2][j] -= pp * z;
                    }
                    a[k + 1][j] -= pp * y;
                    a[k][j] -= pp * x;
                }
                let mmin = if nu < k + 3 { nu } else { k + 3 };
                for row in a.iter_mut().take(mmin + 1).skip(l) {
                    let mut pp = x * row[k] + y * row[k + 1];
                    if k != nu - 1 {
                        pp += z * row[k + 2];
                        row[k + 2] -= pp * r;
                    }
                    row[k + 1] -= pp * q;
                    row[k] -= pp;
                }
            }
            k += 1;
        }
    }
    let eig = wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    Ok((eig, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::polyval;

    fn close_set(mut got: Vec<Complex64>, mut want: Vec<Complex64>, tol: f64) -> bool {
        let key =
            |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000 + (z.im * 1e3).round() as i64;
        got.sort_by_key(key);
        want.sort_by_key(key);
        got.iter().zip(&want).all(|(a, b)| (a - b).norm() < tol)
    }

    #[test]
    fn diagonal() {
        let m = RealMatrix::from_diag(&[-1.0, -2.0]);
        let s = eigenvalues(&m).unwrap();
        assert!(close_set(
            s.eigenvalues,
            vec![Complex64::new(-1.0, 0.0), Complex64::new(-2.0, 0.0)],
            1e-14
        ));
    }

    #[test]
    fn rotation_generator() {
        let m = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let s = eigenvalues(&m).unwrap();
        assert!(close_set(
            s.eigenvalues.clone(),
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
            1e-14
        ));
        assert_eq!(s.stability(), Stability::Marginal);
    }

    #[test]
    fn companion_of_known_roots() {
        // (λ-1)(λ+2)(λ²+2λ+5): roots 1, -2, -1±2i
        let coeffs = [1.0, 3.0, 5.0, 11.0, -10.0];
        let m = RealMatrix::from_fn(4, 4, |i, j| {
            if i == 0 {
                -coeffs[j + 1]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let s = eigenvalues(&m).unwrap();
        for z in &s.eigenvalues {
            assert!(polyval(&coeffs, *z).norm() < 1e-10);
        }
    }

    #[test]
    fn faddeev_leverrier_small() {
        let m = RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let c = characteristic_polynomial(&m).unwrap();
        assert_eq!(c, vec![1.0, -5.0, 5.0]);
    }

    #[test]
    fn rejects_oversized_and_non_square() {
        assert!(matches!(
            eigenvalues(&RealMatrix::zeros(17, 17)),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            eigenvalues(&RealMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn iteration_budget_is_reported() {
        let m = RealMatrix::from_fn(8, 8, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        assert_eq!(
            eigenvalues_general(&m, f64::EPSILON, 0),
            Err(Error::NoConvergence(0))
        );
    }
}
