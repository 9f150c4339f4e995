//! Composite Simpson quadrature of matrix-exponential integrals.
//!
//! The integrands here are all built from the propagator `E(s) = e^{sZ}`,
//! which is advanced between nodes by multiplying with a precomputed
//! `e^{hZ}` rather than re-exponentiating.

use super::{eigenvalues, expm, RealMatrix, Stability};
use crate::{Error, Result};

/// Nominal Simpson step.
pub const QUADRATURE_STEP: f64 = 1.0 / 64.0;

/// Largest horizon tried by [`stationary_integral_oracle`] before it gives
/// up.
pub const QUADRATURE_MAX_HORIZON: f64 = 16384.0;

/// Number of Simpson sub-intervals used on `[0, t]`: `ceil(t / h)`
/// rounded up to an even number, zero for `t = 0`.
pub fn simpson_steps(t: f64) -> usize {
    if !(t > 0.0) {
        return 0;
    }
    let n = libm::ceil(t / QUADRATURE_STEP) as usize;
    n.max(2).next_multiple_of(2)
}

fn simpson_weight(k: usize, steps: usize) -> f64 {
    if k == 0 || k == steps {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Finite-horizon rule on `[0, t]`: Simpson at steps `h` and `2h`
/// combined by one Richardson step, which lifts the error from `O(h^4)`
/// to `O(h^6)`. Calls `f(E(s), weight)` at each node.
fn richardson_simpson_nodes(
    z: &RealMatrix,
    t: f64,
    mut f: impl FnMut(&RealMatrix, f64),
) -> Result<()> {
    let n = z.require_square()?;
    if !(t > 0.0) {
        return Ok(());
    }
    let steps = simpson_steps(t).next_multiple_of(4);
    let h = t / steps as f64;
    let step = expm(&z.scale(h))?;
    let mut e = RealMatrix::identity(n);
    for k in 0..=steps {
        let fine = simpson_weight(k, steps) * h / 3.0;
        let coarse = if k % 2 == 0 {
            simpson_weight(k / 2, steps / 2) * 2.0 * h / 3.0
        } else {
            0.0
        };
        f(&e, (16.0 * fine - coarse) / 15.0);
        if k < steps {
            e = &e * &step;
        }
    }
    Ok(())
}

/// `∫_0^t e^{sZ^T} C e^{sZ} ds`.
pub fn finite_gramian(z: &RealMatrix, c: &RealMatrix, t: f64) -> Result<RealMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let n = z.require_square()?;
    let mut acc = RealMatrix::zeros(n, n);
    richardson_simpson_nodes(z, t, |e, w| {
        let term = &(&e.transpose() * c) * e;
        acc = &acc + &term.scale(w);
    })?;
    Ok(acc.symmetrize())
}

/// `∫_0^t e^{sZ} ds`.
pub fn integrated_propagator(z: &RealMatrix, t: f64) -> Result<RealMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let n = z.require_square()?;
    let mut acc = RealMatrix::zeros(n, n);
    richardson_simpson_nodes(z, t, |e, w| {
        acc = &acc + &e.scale(w);
    })?;
    Ok(acc)
}

/// `∫_0^∞ e^{sZ^T} C e^{sZ} ds` by direct quadrature: an independent check
/// on the Lyapunov solver.
///
/// The horizon starts at 1 and doubles until
/// `|e^{TZ}|_F^2 |C|_F / (2 |max Re λ|) < tol`.
pub fn stationary_integral_oracle(z: &RealMatrix, c: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    let n = z.require_square()?;
    let nc = c.require_square()?;
    if nc != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nc,
        });
    }
    let spectrum = eigenvalues(z)?;
    if spectrum.stability() == Stability::Unstable {
        return Err(Error::NoStationaryState {
            eigenvalues: spectrum.eigenvalues,
        });
    }
    let decay = -spectrum.max_real_part();
    if !(decay > 0.0) {
        // The tail bound is infinite, so no finite horizon can satisfy it.
        return Err(Error::HorizonExceeded(QUADRATURE_MAX_HORIZON));
    }
    let c_norm = c.frobenius_norm();

    let h = QUADRATURE_STEP;
    let step = expm(&z.scale(h))?;
    let mut e = RealMatrix::identity(n);
    let mut acc = RealMatrix::zeros(n, n);
    let mut t0 = 0.0;
    let mut t1 = 1.0;
    loop {
        // Simpson on [t0, t1], continuing the propagator from t0.
        let steps = simpson_steps(t1 - t0);
        for k in 0..=steps {
            let w = simpson_weight(k, steps);
            let term = &(&e.transpose() * c) * &e;
            acc = &acc + &term.scale(w * h / 3.0);
            if k < steps {
                e = &e * &step;
            }
        }
        let en = e.frobenius_norm();
        let tail = en * en * c_norm / (2.0 * decay);
        if tail < tol {
            return Ok(acc.symmetrize());
        }
        if t1 >= QUADRATURE_MAX_HORIZON {
            return Err(Error::HorizonExceeded(t1));
        }
        t0 = t1;
        t1 *= 2.0;
    }
}
