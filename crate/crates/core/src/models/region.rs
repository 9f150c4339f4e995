//! Full pipeline for one parameter point: system, spectrum, stationary
//! state, reduction to modes 1 and 2, and the PPT verdict.

use crate::entanglement::{partial_trace, ppt_check, EntanglementVerdict, PartitionSpec};
use crate::gaussian::{stationary_covariance, CovarianceMatrix, DriftDiffusion};
use crate::numkit::{eigenvalues, Spectrum, Stability};
use crate::{Error, Result};

use super::single::{single_noise_entangled, single_noise_system};
use super::two::{two_noise_equal_temp_region, two_noise_system};
use super::{SingleNoiseParams, TwoNoiseParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelPoint {
    Single(SingleNoiseParams),
    Two(TwoNoiseParams),
}

impl ModelPoint {
    pub fn system(&self) -> Result<DriftDiffusion> {
        match self {
            Self::Single(p) => single_noise_system(p),
            Self::Two(p) => two_noise_system(p),
        }
    }

    fn modes(&self) -> usize {
        match self {
            Self::Single(_) => 3,
            Self::Two(_) => 4,
        }
    }

    /// Theorem-level prediction, where one exists: any stable
    /// single-noise point, two noises at `κ = 0` (always separable), and
    /// two noises at `κ = 1` with equal temperatures.
    pub fn analytic_entangled(&self) -> Result<Option<bool>> {
        match self {
            Self::Single(p) => single_noise_entangled(p.kappa, p.g, p.beta_tilde).map(Some),
            Self::Two(p) if p.kappa == 0.0 => Ok(Some(false)),
            Self::Two(p)
                if p.kappa.abs() == 1.0 && p.is_equal_temperature() && p.beta0_tilde > 1.0 =>
            {
                two_noise_equal_temp_region(p.beta0_tilde, p.g).map(Some)
            }
            Self::Two(_) => Ok(None),
        }
    }
}

/// Classification of one point. `entangled` is only present for stable
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub stable: bool,
    pub entangled: Option<bool>,
    pub witnesses: Option<EntanglementVerdict>,
    pub analytic_entangled: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub system: DriftDiffusion,
    pub spectrum: Spectrum,
    pub stationary: Option<CovarianceMatrix>,
    pub reduced: Option<CovarianceMatrix>,
    pub verdict: RegionVerdict,
}

/// Runs the pipeline. Unstable points are a normal outcome
/// (`stable == false`); solver failures are errors.
pub fn evaluate(point: &ModelPoint) -> Result<Analysis> {
    let system = point.system()?;
    let spectrum = eigenvalues(system.drift())?;
    let stable = spectrum.stability() == Stability::Stable;
    if !stable {
        return Ok(Analysis {
            system,
            spectrum,
            stationary: None,
            reduced: None,
            verdict: RegionVerdict {
                stable: false,
                entangled: None,
                witnesses: None,
                analytic_entangled: None,
            },
        });
    }
    let stationary = match stationary_covariance(&system) {
        Ok(s) => s,
        Err(Error::NoStationaryState { .. }) => unreachable!("stability checked above"),
        Err(e) => return Err(e),
    };
    let reduced = partial_trace(&stationary, &PartitionSpec::pair(point.modes(), 1, 2)?)?;
    let witnesses = ppt_check(&reduced)?;
    Ok(Analysis {
        system,
        spectrum,
        stationary: Some(stationary),
        reduced: Some(reduced),
        verdict: RegionVerdict {
            stable: true,
            entangled: Some(witnesses.entangled()),
            witnesses: Some(witnesses),
            analytic_entangled: point.analytic_entangled()?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entangled_single_noise_point() {
        let p = ModelPoint::Single(SingleNoiseParams::new(0.5, 0.1, 1.05).unwrap());
        let a = evaluate(&p).unwrap();
        let v = a.verdict;
        assert!(v.stable);
        assert_eq!(v.entangled, Some(true));
        assert_eq!(v.analytic_entangled, Some(true));
        let w = v.witnesses.unwrap();
        assert!(w.det_tilde < 0.0 && w.log_negativity > 0.0);
    }

    #[test]
    fn unstable_point_is_data() {
        let p = ModelPoint::Single(SingleNoiseParams::new(0.9, 1.0, 1.5).unwrap());
        let a = evaluate(&p).unwrap();
        assert!(!a.verdict.stable);
        assert_eq!(a.verdict.entangled, None);
        assert!(a.stationary.is_none());
    }

    #[test]
    fn thermal_point() {
        let p = ModelPoint::Single(SingleNoiseParams::new(0.0, 1.0, 2.0).unwrap());
        let a = evaluate(&p).unwrap();
        assert_eq!(a.verdict.entangled, Some(false));
        let s = a.stationary.unwrap();
        assert!(
            s.matrix()
                .max_abs_diff(&crate::numkit::RealMatrix::identity(6).scale(2.0))
                < 1e-12
        );
    }
}
