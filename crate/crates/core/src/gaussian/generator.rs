use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numkit::{hermitian_min_eigenvalue, ComplexMatrix, RealMatrix};
use crate::{Error, Result};

const STRUCTURE_TOL: f64 = 1e-12;

/// Gaussian GKLS generator on `d` modes with `m` noise operators
///
/// ```text
/// H   = Σ_jk ( Ω_jk a_j† a_k + (κ_jk a_j† a_k† + κ̄_jk a_j a_k) / 2 ) + ζ-terms
/// L_l = Σ_k ( v̄_lk a_k + u_lk a_k† )
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GklsGenerator {
    d: usize,
    omega: ComplexMatrix,
    kappa: ComplexMatrix,
    v: ComplexMatrix,
    u: ComplexMatrix,
    zeta: Vec<Complex64>,
}

impl GklsGenerator {
    pub fn new(
        omega: ComplexMatrix,
        kappa: ComplexMatrix,
        v: ComplexMatrix,
        u: ComplexMatrix,
        zeta: Vec<Complex64>,
    ) -> Result<Self> {
        let d = omega.require_square()?;
        let kd = kappa.require_square()?;
        if kd != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: kd,
            });
        }
        for noise in [&v, &u] {
            if noise.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: noise.cols(),
                });
            }
        }
        if v.rows() != u.rows() {
            return Err(Error::DimensionMismatch {
                expected: v.rows(),
                found: u.rows(),
            });
        }
        let m = v.rows();
        if m == 0 || m > 2 * d {
            return Err(Error::InvalidGenerator(format!(
                "noise count {m} outside 1..={}",
                2 * d
            )));
        }
        if zeta.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: zeta.len(),
            });
        }
        let finite = |x: &ComplexMatrix| x.max_abs().is_finite();
        if !(finite(&omega) && finite(&kappa) && finite(&v) && finite(&u))
            || zeta.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let h = omega.hermitian_deviation();
        if h > STRUCTURE_TOL {
            return Err(Error::InvalidGenerator(format!(
                "Omega not Hermitian (deviation {h:e})"
            )));
        }
        let s = kappa.symmetric_deviation();
        if s > STRUCTURE_TOL {
            return Err(Error::InvalidGenerator(format!(
                "K not symmetric (deviation {s:e})"
            )));
        }
        Ok(Self {
            d,
            omega,
            kappa,
            v,
            u,
            zeta,
        })
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn noise_count(&self) -> usize {
        self.v.rows()
    }

    pub fn omega(&self) -> &ComplexMatrix {
        &self.omega
    }

    pub fn kappa(&self) -> &ComplexMatrix {
        &self.kappa
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn zeta(&self) -> &[Complex64] {
        &self.zeta
    }
}

/// Real drift `Z` and diffusion `C` on `R^{2d}`, ordered `[p | q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftDiffusion {
    d: usize,
    z: RealMatrix,
    c: RealMatrix,
}

impl DriftDiffusion {
    /// Checks shapes, symmetry of `C` and that `C` is PSD to `1e-10`.
    pub fn new(z: RealMatrix, c: RealMatrix) -> Result<Self> {
        let n = z.require_square()?;
        if n % 2 != 0 {
            return Err(Error::OddDimension(n));
        }
        let nc = c.require_square()?;
        if nc != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: nc,
            });
        }
        if !z.is_finite() || !c.is_finite() {
            return Err(Error::NonFinite);
        }
        let asym = c.asymmetry();
        if asym > STRUCTURE_TOL * c.frobenius_norm().max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        let c = c.symmetrize();
        let min = hermitian_min_eigenvalue(&c.to_complex())?;
        if min < -1e-10 * c.frobenius_norm().max(1.0) {
            return Err(Error::InvalidGenerator(format!(
                "diffusion matrix not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { d: n / 2, z, c })
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn drift(&self) -> &RealMatrix {
        &self.z
    }

    pub fn diffusion(&self) -> &RealMatrix {
        &self.c
    }
}

/// The drift/diffusion pair of a generator.
///
/// With `X = U + V̄` and `Y = U - V̄`:
///
/// ```text
/// Z = 1/2 [[ Re Y*X, Im Y*Y ], [ -Im X*X, Re X*Y ]]
///   +     [[ -Im(Ω+K), Re(K-Ω) ], [ Re(Ω+K), Im(K-Ω) ]]
/// C =     [[ Re X*X, Im X*Y ], [ -Im Y*X, Re Y*Y ]]
/// ```
pub fn build_drift_diffusion(gen: &GklsGenerator) -> Result<DriftDiffusion> {
    let d = gen.d;
    let vbar = gen.v.conj();
    let x = &gen.u + &vbar;
    let y = &gen.u - &vbar;
    let xa = x.adjoint();
    let ya = y.adjoint();
    let yx = &ya * &x;
    let yy = &ya * &y;
    let xx = &xa * &x;
    let xy = &xa * &y;
    let opk = &gen.omega + &gen.kappa;
    let kmo = &gen.kappa - &gen.omega;

    let z = RealMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let (a, b) = (i % d, j % d);
        match (i < d, j < d) {
            (true, true) => 0.5 * yx[(a, b)].re - opk[(a, b)].im,
            (true, false) => 0.5 * yy[(a, b)].im + kmo[(a, b)].re,
            (false, true) => -0.5 * xx[(a, b)].im + opk[(a, b)].re,
            (false, false) => 0.5 * xy[(a, b)].re + kmo[(a, b)].im,
        }
    });
    let c = RealMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let (a, b) = (i % d, j % d);
        match (i < d, j < d) {
            (true, true) => xx[(a, b)].re,
            (true, false) => xy[(a, b)].im,
            (false, true) => -yx[(a, b)].im,
            (false, false) => yy[(a, b)].re,
        }
    });
    DriftDiffusion::new(z, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn closed_hamiltonian_is_a_rotation() {
        let w = [1.0, 2.5];
        let omega = ComplexMatrix::from_fn(2, 2, |i, j| if i == j { c(w[i]) } else { c(0.0) });
        let gen = GklsGenerator::new(
            omega,
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::zeros(1, 2),
            ComplexMatrix::zeros(1, 2),
            vec![c(0.0); 2],
        )
        .unwrap();
        let dd = build_drift_diffusion(&gen).unwrap();
        let want = RealMatrix::from_rows(&[
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -2.5],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 2.5, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(dd.drift().max_abs_diff(&want), 0.0);
        assert_eq!(dd.diffusion().max_abs(), 0.0);
    }

    #[test]
    fn damped_mode() {
        // L = v a with v^2 = 1: Z = -I/2, C = I
        let gen = GklsGenerator::new(
            ComplexMatrix::zeros(1, 1),
            ComplexMatrix::zeros(1, 1),
            ComplexMatrix::from_vec(1, 1, vec![c(1.0)]).unwrap(),
            ComplexMatrix::zeros(1, 1),
            vec![c(0.0)],
        )
        .unwrap();
        let dd = build_drift_diffusion(&gen).unwrap();
        assert_eq!(
            dd.drift()
                .max_abs_diff(&RealMatrix::identity(2).scale(-0.5)),
            0.0
        );
        assert_eq!(dd.diffusion().max_abs_diff(&RealMatrix::identity(2)), 0.0);
    }

    #[test]
    fn rejects_non_hermitian_omega() {
        let omega = ComplexMatrix::from_vec(2, 2, vec![c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        let err = GklsGenerator::new(
            omega,
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::zeros(1, 2),
            ComplexMatrix::zeros(1, 2),
            vec![c(0.0); 2],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGenerator(_)));
    }
}
