//! Bipartite entanglement of Gaussian states.
//!
//! For one mode per party, a state with reduced covariance `S` (ordered
//! `[p_A p_B | q_A q_B]`) is separable iff
//!
//! ```text
//! S̃ = S + [[ 0,  0,  i,  0],
//!          [ 0,  0,  0, -i],
//!          [-i,  0,  0,  0],
//!          [ 0,  i,  0,  0]]
//! ```
//!
//! is positive semidefinite. `det S̃` and the logarithmic negativity are
//! reported as witnesses alongside the smallest eigenvalue.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::gaussian::{symplectic_form, CovarianceMatrix};
use crate::numkit::{
    eigenvalues, hermitian_min_eigenvalue, psd_tolerance, ComplexMatrix, RealMatrix,
};
use crate::{Error, Result};

/// Which modes to keep, and how they split between the two parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    d_total: usize,
    party_a: Vec<usize>,
    party_b: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(d_total: usize, party_a: Vec<usize>, party_b: Vec<usize>) -> Result<Self> {
        if party_a.is_empty() || party_b.is_empty() {
            return Err(Error::InvalidPartition(
                "both parties need at least one mode".into(),
            ));
        }
        let mut seen = alloc::vec![false; d_total];
        for &k in party_a.iter().chain(&party_b) {
            if k >= d_total {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    modes: d_total,
                });
            }
            if seen[k] {
                return Err(Error::InvalidPartition(format!("mode {k} listed twice")));
            }
            seen[k] = true;
        }
        Ok(Self {
            d_total,
            party_a,
            party_b,
        })
    }

    /// One mode per party.
    pub fn pair(d_total: usize, a: usize, b: usize) -> Result<Self> {
        Self::new(d_total, alloc::vec![a], alloc::vec![b])
    }

    pub fn modes(&self) -> usize {
        self.d_total
    }

    /// Kept modes: party A followed by party B.
    pub fn keep(&self) -> Vec<usize> {
        self.party_a.iter().chain(&self.party_b).copied().collect()
    }

    pub fn party_a(&self) -> &[usize] {
        &self.party_a
    }

    pub fn party_b(&self) -> &[usize] {
        &self.party_b
    }
}

/// Covariance of the kept modes: rows and columns `j` and `j + d` for each
/// kept `j`, in the listed order.
pub fn partial_trace(s: &CovarianceMatrix, spec: &PartitionSpec) -> Result<CovarianceMatrix> {
    let d = s.modes();
    if spec.d_total != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: spec.d_total,
        });
    }
    let keep = spec.keep();
    let idx: Vec<usize> = keep
        .iter()
        .copied()
        .chain(keep.iter().map(|j| j + d))
        .collect();
    CovarianceMatrix::new(s.matrix().principal_submatrix(&idx))
}

fn require_two_modes(s: &CovarianceMatrix) -> Result<()> {
    if s.modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: 2 * s.modes(),
        });
    }
    Ok(())
}

/// `S̃` for a two-mode covariance (see the module docs).
pub fn ppt_tilde_matrix(s_red: &CovarianceMatrix) -> Result<ComplexMatrix> {
    require_two_modes(s_red)?;
    let mut t = s_red.matrix().to_complex();
    let i = Complex64::new(0.0, 1.0);
    t[(0, 2)] += i;
    t[(1, 3)] -= i;
    t[(2, 0)] -= i;
    t[(3, 1)] += i;
    Ok(t)
}

/// `S + iJ̃` for an arbitrary split, where `J̃` is the symplectic form with
/// the sign of party A's block reversed.
///
/// For one mode per party this is the complex conjugate of
/// [`ppt_tilde_matrix`] and so has the same spectrum.
pub fn general_ppt_matrix(s: &CovarianceMatrix, d_a: usize) -> Result<ComplexMatrix> {
    let d = s.modes();
    if d_a == 0 || d_a >= d {
        return Err(Error::InvalidPartition(format!(
            "party A size {d_a} for {d} modes"
        )));
    }
    let mut j = symplectic_form(d);
    for k in 0..d_a {
        j[(k, k + d)] = -j[(k, k + d)];
        j[(k + d, k)] = -j[(k + d, k)];
    }
    ComplexMatrix::from_parts(s.matrix(), &j)
}

/// Separability decision and witnesses for a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementVerdict {
    pub separable: bool,
    /// Smallest eigenvalue of `S̃`.
    pub min_eig_tilde: f64,
    pub det_tilde: f64,
    pub log_negativity: f64,
    /// Whether the input itself satisfied `S - iJ >= 0`.
    pub valid_input: bool,
}

impl EntanglementVerdict {
    pub fn entangled(&self) -> bool {
        !self.separable
    }
}

/// Separable iff `min eig S̃ >= -1e-9 max(1, |S̃|_F)`.
pub fn ppt_check(s_red: &CovarianceMatrix) -> Result<EntanglementVerdict> {
    let tilde = ppt_tilde_matrix(s_red)?;
    let min_eig_tilde = hermitian_min_eigenvalue(&tilde)?;
    let separable = min_eig_tilde >= -psd_tolerance(tilde.frobenius_norm());
    Ok(EntanglementVerdict {
        separable,
        min_eig_tilde,
        det_tilde: tilde.determinant()?.re,
        log_negativity: log_negativity(s_red)?,
        valid_input: s_red.is_valid()?,
    })
}

/// `det S̃` by cofactor expansion.
pub fn det_witness(s_red: &CovarianceMatrix) -> Result<f64> {
    Ok(ppt_tilde_matrix(s_red)?.determinant()?.re)
}

/// `det S̃` counts as strictly negative below `-1e-9 max(1, |S|_F^4)`.
pub fn det_threshold(s_red: &CovarianceMatrix) -> f64 {
    let n = s_red.matrix().frobenius_norm();
    1e-9 * (n * n * n * n).max(1.0)
}

pub fn det_is_negative(det: f64, s_red: &CovarianceMatrix) -> bool {
    det < -det_threshold(s_red)
}

/// Symplectic eigenvalues `ν_k` of a `2d x 2d` covariance, ascending: the
/// moduli of the eigenvalues `±iν_k` of `J S`.
pub fn symplectic_eigenvalues(s: &RealMatrix) -> Result<Vec<f64>> {
    let n = s.require_square()?;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let js = &symplectic_form(n / 2) * s;
    let mut nu: Vec<f64> = eigenvalues(&js)?
        .eigenvalues
        .iter()
        .map(|z| z.im.abs())
        .collect();
    nu.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    Ok(nu.into_iter().step_by(2).collect())
}

/// Partial transpose on party B: reverse the sign of `p_B`.
pub fn partial_transpose(s_red: &CovarianceMatrix) -> Result<RealMatrix> {
    require_two_modes(s_red)?;
    let flip = RealMatrix::from_diag(&[1.0, -1.0, 1.0, 1.0]);
    Ok(&(&flip * s_red.matrix()) * &flip)
}

/// `Σ max(0, -ln ν̃_k)` over the symplectic eigenvalues of the partially
/// transposed covariance (natural logarithm).
pub fn log_negativity(s_red: &CovarianceMatrix) -> Result<f64> {
    let nu = symplectic_eigenvalues(&partial_transpose(s_red)?)?;
    Ok(nu
        .iter()
        .filter(|&&v| v < 1.0 - 1e-12)
        .fold(0.0, |acc, &v| acc - libm::log(v)))
}
