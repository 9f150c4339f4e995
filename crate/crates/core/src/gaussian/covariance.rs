use alloc::vec;
use alloc::vec::Vec;

use crate::numkit::{hermitian_min_eigenvalue, psd_tolerance, ComplexMatrix, RealMatrix};
use crate::{Error, Result};

use super::symplectic_form;

const SYMMETRY_TOL: f64 = 1e-12;

/// Outcome of the uncertainty-principle test `S - iJ >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub valid: bool,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

/// Real symmetric `2d x 2d` covariance matrix.
///
/// With this normalisation `S_jk = 2 tr(ρ p_j p_k)` on the `p` block (and
/// likewise for `q`), so the vacuum is `I`. Validity is not enforced on
/// construction; see [`CovarianceMatrix::validity`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    d: usize,
    s: RealMatrix,
}

impl CovarianceMatrix {
    pub fn new(s: RealMatrix) -> Result<Self> {
        let n = s.require_square()?;
        if n % 2 != 0 {
            return Err(Error::OddDimension(n));
        }
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
        let asym = s.asymmetry();
        if asym > SYMMETRY_TOL * s.frobenius_norm().max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self {
            d: n / 2,
            s: s.symmetrize(),
        })
    }

    pub fn vacuum(d: usize) -> Self {
        Self {
            d,
            s: RealMatrix::identity(2 * d),
        }
    }

    /// Uncorrelated state with the given `<p_j^2>` and `<q_j^2>`.
    pub fn from_moments(p_sq: &[f64], q_sq: &[f64]) -> Result<Self> {
        if p_sq.len() != q_sq.len() {
            return Err(Error::DimensionMismatch {
                expected: p_sq.len(),
                found: q_sq.len(),
            });
        }
        let diag: Vec<f64> = p_sq.iter().chain(q_sq).map(|m| 2.0 * m).collect();
        Self::new(RealMatrix::from_diag(&diag))
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.s
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.s
    }

    /// `<p_j^2>`
    pub fn p_second_moment(&self, j: usize) -> f64 {
        self.s[(j, j)] / 2.0
    }

    /// `<q_j^2>`
    pub fn q_second_moment(&self, j: usize) -> f64 {
        self.s[(j + self.d, j + self.d)] / 2.0
    }

    pub fn validity(&self) -> Result<ValidityReport> {
        let h = ComplexMatrix::from_parts(&self.s, &(-&symplectic_form(self.d)))?;
        let min_eigenvalue = hermitian_min_eigenvalue(&h)?;
        let tolerance = psd_tolerance(self.s.frobenius_norm());
        Ok(ValidityReport {
            valid: min_eigenvalue >= -tolerance,
            min_eigenvalue,
            tolerance,
        })
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.validity()?.valid)
    }
}

/// Validity check of a raw symmetric matrix.
pub fn is_valid_covariance(s: &RealMatrix) -> Result<ValidityReport> {
    CovarianceMatrix::new(s.clone())?.validity()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: Vec<f64>,
    cov: CovarianceMatrix,
}

impl GaussianState {
    /// Rejects covariances that violate the uncertainty principle.
    pub fn new(mean: Vec<f64>, cov: CovarianceMatrix) -> Result<Self> {
        if mean.len() != 2 * cov.modes() {
            return Err(Error::DimensionMismatch {
                expected: 2 * cov.modes(),
                found: mean.len(),
            });
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let report = cov.validity()?;
        if !report.valid {
            return Err(Error::InvalidParameter(alloc::format!(
                "covariance violates S - iJ >= 0 (min eigenvalue {:e})",
                report.min_eigenvalue
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn centered(cov: CovarianceMatrix) -> Result<Self> {
        let n = 2 * cov.modes();
        Self::new(vec![0.0; n], cov)
    }

    pub(crate) fn new_unchecked(mean: Vec<f64>, cov: CovarianceMatrix) -> Self {
        Self { mean, cov }
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &CovarianceMatrix {
        &self.cov
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_valid_on_the_boundary() {
        let r = CovarianceMatrix::vacuum(3).validity().unwrap();
        assert!(r.valid);
        assert!(r.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn half_identity_violates_uncertainty() {
        let r = is_valid_covariance(&RealMatrix::identity(4).scale(0.5)).unwrap();
        assert!(!r.valid);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-14);
    }

    #[test]
    fn moments_read_back() {
        let s = CovarianceMatrix::from_moments(&[0.5, 1.5], &[0.75, 2.0]).unwrap();
        assert_eq!(s.matrix()[(0, 0)], 1.0);
        assert_eq!(s.matrix()[(3, 3)], 4.0);
        assert_eq!(s.p_second_moment(1), 1.5);
        assert_eq!(s.q_second_moment(0), 0.75);
    }

    #[test]
    fn rejects_asymmetric_and_odd() {
        let a = RealMatrix::from_rows(&[[1.0, 0.1], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            CovarianceMatrix::new(a),
            Err(Error::NotSymmetric(_))
        ));
        assert_eq!(
            CovarianceMatrix::new(RealMatrix::identity(3)).unwrap_err(),
            Error::OddDimension(3)
        );
    }

    #[test]
    fn state_rejects_unphysical_covariance() {
        let s = CovarianceMatrix::new(RealMatrix::identity(2).scale(0.5)).unwrap();
        assert!(GaussianState::centered(s).is_err());
    }
}
