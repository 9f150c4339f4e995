use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numkit::{
    eigenvalues, expm, finite_gramian, integrated_propagator, solve_lyapunov, Stability,
};
use crate::{Error, Result};

use super::{complex_to_real, real_to_complex, CovarianceMatrix, DriftDiffusion, GaussianState};

/// Covariance of the unique invariant Gaussian state, `Z^T S + S Z + C = 0`.
///
/// Requires every eigenvalue of `Z` to have real part below
/// `-STABILITY_BAND`; otherwise the spectrum is returned in the error.
pub fn stationary_covariance(dd: &DriftDiffusion) -> Result<CovarianceMatrix> {
    let spectrum = eigenvalues(dd.drift())?;
    if spectrum.stability() != Stability::Stable {
        return Err(Error::NoStationaryState {
            eigenvalues: spectrum.eigenvalues,
        });
    }
    CovarianceMatrix::new(solve_lyapunov(dd.drift(), dd.diffusion())?)
}

/// Gaussian state after time `t`:
///
/// ```text
/// μ_t = e^{tZ^T} μ - ∫_0^t e^{sZ^T} ζ ds
/// S_t = e^{tZ^T} S e^{tZ} + ∫_0^t e^{sZ^T} C e^{sZ} ds
/// ```
///
/// `zeta` is the drive in its real `[Re | Im]` form.
pub fn evolve_state(
    state: &GaussianState,
    dd: &DriftDiffusion,
    zeta: &[f64],
    t: f64,
) -> Result<GaussianState> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let n = 2 * dd.modes();
    if state.mean().len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: state.mean().len(),
        });
    }
    if zeta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: zeta.len(),
        });
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let z = dd.drift();
    let e = expm(&z.scale(t))?;
    let et = e.transpose();

    let mut mean = et.mul_vec(state.mean());
    if zeta.iter().any(|x| *x != 0.0) {
        let drive = integrated_propagator(z, t)?.transpose().mul_vec(zeta);
        for (m, dz) in mean.iter_mut().zip(drive) {
            *m -= dz;
        }
    }
    let s = &(&(&et * state.covariance().matrix()) * &e) + &finite_gramian(z, dd.diffusion(), t)?;
    Ok(GaussianState::new_unchecked(
        mean,
        CovarianceMatrix::new(s.symmetrize())?,
    ))
}

/// `T_t(W(z)) = exp(log_amplitude + i phase) W(evolved)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylFactor {
    /// `-1/2 ∫_0^t Re<e^{sZ} z, C e^{sZ} z> ds`, never positive.
    pub log_amplitude: f64,
    /// `∫_0^t Re<ζ, e^{sZ} z> ds`
    pub phase: f64,
    /// `e^{tZ} z`
    pub evolved: Vec<Complex64>,
}

pub fn weyl_evolution_factor(
    z: &[Complex64],
    t: f64,
    dd: &DriftDiffusion,
    zeta: &[Complex64],
) -> Result<WeylFactor> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let d = dd.modes();
    for len in [z.len(), zeta.len()] {
        if len != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: len,
            });
        }
    }
    let x = complex_to_real(z);
    if t == 0.0 {
        return Ok(WeylFactor {
            log_amplitude: 0.0,
            phase: 0.0,
            evolved: z.to_vec(),
        });
    }
    let drift = dd.drift();
    let evolved = real_to_complex(&expm(&drift.scale(t))?.mul_vec(&x))?;
    let gram = finite_gramian(drift, dd.diffusion(), t)?;
    // The Gramian is PSD, so any positive value is rounding.
    let log_amplitude = (-0.5 * gram.quadratic_form(&x)).min(0.0);
    let w = complex_to_real(zeta);
    let phase = if w.iter().any(|v| *v != 0.0) {
        let px = integrated_propagator(drift, t)?.mul_vec(&x);
        w.iter().zip(&px).map(|(a, b)| a * b).sum()
    } else {
        0.0
    };
    Ok(WeylFactor {
        log_amplitude,
        phase,
        evolved,
    })
}

/// Phase in `W(z) W(w) = e^{-i Im<z, w>} W(z + w)`, i.e. `-Im<z, w>` with
/// `<·,·>` antilinear in the first argument.
pub fn weyl_ccr_phase(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            found: w.len(),
        });
    }
    Ok(-z.iter().zip(w).map(|(a, b)| (a.conj() * b).im).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::RealMatrix;
    use alloc::vec;

    fn damped(d: usize) -> DriftDiffusion {
        DriftDiffusion::new(
            RealMatrix::identity(2 * d).scale(-0.5),
            RealMatrix::identity(2 * d).scale(3.0),
        )
        .unwrap()
    }

    #[test]
    fn stationary_of_damped_modes() {
        let s = stationary_covariance(&damped(2)).unwrap();
        assert!(s.matrix().max_abs_diff(&RealMatrix::identity(4).scale(3.0)) < 1e-13);
    }

    #[test]
    fn unstable_reports_spectrum() {
        let dd = DriftDiffusion::new(RealMatrix::identity(2), RealMatrix::identity(2)).unwrap();
        match stationary_covariance(&dd) {
            Err(Error::NoStationaryState { eigenvalues }) => assert_eq!(eigenvalues.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn time_zero_is_identity_map() {
        let st = GaussianState::centered(CovarianceMatrix::vacuum(2)).unwrap();
        let out = evolve_state(&st, &damped(2), &[0.0; 4], 0.0).unwrap();
        assert_eq!(out, st);
        assert!(evolve_state(&st, &damped(2), &[0.0; 4], -1.0).is_err());
    }

    #[test]
    fn damped_relaxation_is_exponential() {
        // S_t = e^{-t} I + 3 (1 - e^{-t}) I
        let st = GaussianState::centered(CovarianceMatrix::vacuum(1)).unwrap();
        let out = evolve_state(&st, &damped(1), &[0.0; 2], 2.0).unwrap();
        let e = libm::exp(-2.0);
        let want = e + 3.0 * (1.0 - e);
        assert!((out.covariance().matrix()[(0, 0)] - want).abs() < 1e-12);
    }

    #[test]
    fn constant_drive_shifts_the_mean() {
        // μ_t = -∫_0^t e^{-s/2} ζ ds = -2 (1 - e^{-t/2}) ζ
        let st = GaussianState::centered(CovarianceMatrix::vacuum(1)).unwrap();
        let out = evolve_state(&st, &damped(1), &[1.0, 0.0], 1.0).unwrap();
        let want = -2.0 * (1.0 - libm::exp(-0.5));
        assert!((out.mean()[0] - want).abs() < 1e-12);
        assert_eq!(out.mean()[1], 0.0);
    }

    #[test]
    fn ccr_phase_examples() {
        let e1 = [Complex64::new(1.0, 0.0)];
        let ie1 = [Complex64::new(0.0, 1.0)];
        assert_eq!(weyl_ccr_phase(&e1, &e1).unwrap(), 0.0);
        assert_eq!(weyl_ccr_phase(&e1, &ie1).unwrap(), -1.0);
        assert!(weyl_ccr_phase(&e1, &[]).is_err());
    }

    #[test]
    fn weyl_trivial_cases() {
        let dd = damped(1);
        let zero = [Complex64::new(0.0, 0.0)];
        let f = weyl_evolution_factor(&zero, 3.0, &dd, &zero).unwrap();
        assert_eq!((f.log_amplitude, f.phase), (0.0, 0.0));
        assert_eq!(f.evolved, vec![Complex64::new(0.0, 0.0)]);
        let z = [Complex64::new(0.3, -1.0)];
        let f = weyl_evolution_factor(&z, 0.0, &dd, &zero).unwrap();
        assert_eq!(f.evolved, z.to_vec());
    }
}
