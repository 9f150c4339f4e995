//! The two squeezed-pair models.
//!
//! Both couple a pair of oscillators (modes 1 and 2, frequency 1) with a
//! two-mode interaction and single-mode squeezing of strength `κ` to
//! thermal reservoirs through quadratic couplings of strength `g`:
//!
//! - one reservoir, mode 0 coupled to mode 1 ([`single`], 3 modes);
//! - two reservoirs, mode 0 coupled to 1 and mode 3 coupled to 2
//!   ([`two`], 4 modes).
//!
//! Reservoir temperatures enter through `β̃ = coth(β/2)`.

pub mod region;
pub mod single;
pub mod temperature;
pub mod two;

pub use region::{evaluate, Analysis, ModelPoint, RegionVerdict};
pub use single::SingleNoiseParams;
pub use two::TwoNoiseParams;

use crate::gaussian::DriftDiffusion;
use crate::numkit::RealMatrix;
use crate::{Error, Result};

/// Entrywise comparison of the hard-coded drift/diffusion pair with the one
/// assembled from the generator.
pub(crate) fn cross_check(explicit: &DriftDiffusion, built: &DriftDiffusion) -> Result<()> {
    fn compare(a: &RealMatrix, b: &RealMatrix) -> Result<()> {
        let tol = 1e-14 * a.max_abs().max(1.0);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if (a[(i, j)] - b[(i, j)]).abs() > tol {
                    return Err(Error::ConstructionMismatch {
                        row: i,
                        col: j,
                        left: a[(i, j)],
                        right: b[(i, j)],
                    });
                }
            }
        }
        Ok(())
    }
    compare(explicit.drift(), built.drift())?;
    compare(explicit.diffusion(), built.diffusion())
}

pub(crate) fn require_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!(
            "{name} must be finite"
        )))
    }
}

pub(crate) fn require_coupling(g: f64) -> Result<()> {
    require_finite("g", g)?;
    if g == 0.0 {
        return Err(Error::InvalidParameter(
            "coupling g must be non-zero".into(),
        ));
    }
    Ok(())
}

pub(crate) fn require_beta_tilde(name: &str, b: f64) -> Result<()> {
    require_finite(name, b)?;
    if !(b >= 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "{name} must be >= 1, got {b}"
        )));
    }
    Ok(())
}
