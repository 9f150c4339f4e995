//! Two reservoirs: mode 0 coupled to mode 1 and mode 3 coupled to mode 2.

use alloc::vec;

use num_complex::Complex64;

use super::temperature::noise_rates;
use super::{cross_check, require_beta_tilde, require_coupling, require_finite};
use crate::gaussian::{build_drift_diffusion, CovarianceMatrix, DriftDiffusion, GklsGenerator};
use crate::numkit::{solve_lyapunov, ComplexMatrix, RealMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoNoiseParams {
    pub kappa: f64,
    pub g: f64,
    pub beta0_tilde: f64,
    pub beta3_tilde: f64,
}

impl TwoNoiseParams {
    pub fn new(kappa: f64, g: f64, beta0_tilde: f64, beta3_tilde: f64) -> Result<Self> {
        require_finite("kappa", kappa)?;
        require_coupling(g)?;
        require_beta_tilde("beta0_tilde", beta0_tilde)?;
        require_beta_tilde("beta3_tilde", beta3_tilde)?;
        Ok(Self {
            kappa,
            g,
            beta0_tilde,
            beta3_tilde,
        })
    }

    /// Both reservoirs at the same `β̃ = b`.
    pub fn equal_temperature(kappa: f64, g: f64, b: f64) -> Result<Self> {
        Self::new(kappa, g, b, b)
    }

    pub fn is_equal_temperature(&self) -> bool {
        self.beta0_tilde == self.beta3_tilde
    }
}

/// Generator with `L_1 = v_0 a_0`, `L_2 = u_0 a_0†`, `L_3 = v_3 a_3`,
/// `L_4 = u_3 a_3†`, couplings `g/2` on the pairs 0-1 and 2-3, `1/2` on
/// 1-2, and squeezing `κ/2` on modes 1 and 2.
pub fn two_noise_generator(p: &TwoNoiseParams) -> Result<GklsGenerator> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let (v0, u0) = noise_rates(p.beta0_tilde);
    let (v3, u3) = noise_rates(p.beta3_tilde);
    let omega = ComplexMatrix::from_fn(4, 4, |i, j| match (i.min(j), i.max(j)) {
        (0, 1) | (2, 3) => r(p.g / 2.0),
        (1, 2) => r(0.5),
        _ => r(0.0),
    });
    let kappa = ComplexMatrix::from_fn(4, 4, |i, j| {
        if i == j && (i == 1 || i == 2) {
            r(p.kappa / 2.0)
        } else {
            r(0.0)
        }
    });
    let vm = ComplexMatrix::from_fn(4, 4, |l, k| match (l, k) {
        (0, 0) => r(v0),
        (2, 3) => r(v3),
        _ => r(0.0),
    });
    let um = ComplexMatrix::from_fn(4, 4, |l, k| match (l, k) {
        (1, 0) => r(u0),
        (3, 3) => r(u3),
        _ => r(0.0),
    });
    GklsGenerator::new(omega, kappa, vm, um, vec![r(0.0); 4])
}

fn explicit_drift(kappa: f64, g: f64) -> Result<RealMatrix> {
    let k = kappa;
    #[rustfmt::skip]
    let z = RealMatrix::from_rows(&[
        [-1.0, 0.0, 0.0,  0.0,  0.0,   -g,  0.0,  0.0],
        [ 0.0, 0.0, 0.0,  0.0,   -g,    k, -1.0,  0.0],
        [ 0.0, 0.0, 0.0,  0.0,  0.0, -1.0,    k,   -g],
        [ 0.0, 0.0, 0.0, -1.0,  0.0,  0.0,   -g,  0.0],
        [ 0.0,   g, 0.0,  0.0, -1.0,  0.0,  0.0,  0.0],
        [   g,   k, 1.0,  0.0,  0.0,  0.0,  0.0,  0.0],
        [ 0.0, 1.0,   k,    g,  0.0,  0.0,  0.0,  0.0],
        [ 0.0, 0.0,   g,  0.0,  0.0,  0.0,  0.0, -1.0],
    ])?;
    Ok(z.scale(0.5))
}

/// The 8x8 pair written out entry by entry.
pub fn two_noise_explicit(p: &TwoNoiseParams) -> Result<DriftDiffusion> {
    let (b0, b3) = (p.beta0_tilde, p.beta3_tilde);
    DriftDiffusion::new(
        explicit_drift(p.kappa, p.g)?,
        RealMatrix::from_diag(&[b0, 0.0, 0.0, b3, b0, 0.0, 0.0, b3]),
    )
}

/// Drift/diffusion pair, checked entrywise against the generator route.
pub fn two_noise_system(p: &TwoNoiseParams) -> Result<DriftDiffusion> {
    let explicit = two_noise_explicit(p)?;
    let built = build_drift_diffusion(&two_noise_generator(p)?)?;
    cross_check(&explicit, &built)?;
    Ok(explicit)
}

/// `det(λ - Z)` is the square of this quartic (highest power first).
pub fn two_noise_quartic(kappa: f64, g: f64) -> [f64; 5] {
    let (k2, g2) = (kappa * kappa, g * g);
    [
        1.0,
        1.0,
        (2.0 * (1.0 + g2) - k2) / 4.0,
        (1.0 - k2 + g2) / 4.0,
        (1.0 - k2 + g2 * g2) / 16.0,
    ]
}

/// Routh-Hurwitz test for `c₀λ⁴ + c₁λ³ + c₂λ² + c₃λ + c₄` with `c₀ > 0`:
/// all coefficients positive, `c₁c₂ > c₀c₃` and
/// `c₁c₂c₃ > c₀c₃² + c₁²c₄`.
pub fn routh_hurwitz_quartic(c: &[f64; 5]) -> bool {
    let [c0, c1, c2, c3, c4] = *c;
    c.iter().all(|x| *x > 0.0) && c1 * c2 > c0 * c3 && c1 * c2 * c3 > c0 * c3 * c3 + c1 * c1 * c4
}

/// Stable iff `κ² < min(1 + g⁴, 2)`.
pub fn two_noise_stability(kappa: f64, g: f64) -> Result<bool> {
    require_finite("kappa", kappa)?;
    require_coupling(g)?;
    let g2 = g * g;
    Ok(kappa * kappa < (1.0 + g2 * g2).min(2.0))
}

/// Reduced covariance (modes 1, 2) at `κ = 0`.
pub fn two_noise_k0_closed_form(
    g: f64,
    beta0_tilde: f64,
    beta3_tilde: f64,
) -> Result<CovarianceMatrix> {
    let p = TwoNoiseParams::new(0.0, g, beta0_tilde, beta3_tilde)?;
    let g2 = g * g;
    let (a, b) = (1.0 - g2, 1.0 + g2);
    let m = [
        [-a, 0.0, 0.0, -b],
        [0.0, a, b, 0.0],
        [0.0, b, -a, 0.0],
        [-b, 0.0, 0.0, a],
    ];
    let mean = (p.beta0_tilde + p.beta3_tilde) / 2.0;
    let f = (p.beta0_tilde - p.beta3_tilde) * g2 / (4.0 * (1.0 + g2 * g2));
    CovarianceMatrix::new(RealMatrix::from_fn(4, 4, |i, j| {
        f * m[i][j] + if i == j { mean } else { 0.0 }
    }))
}

/// `det S̃` of [`two_noise_k0_closed_form`] in closed form, with
/// `s = β̃₀ + β̃₃` and `d = β̃₀ - β̃₃`:
/// `((s/2)² - 1)² + d²g⁴/(16(1+g⁴)) ((g⁴d² + 32g²)/(4(1+g⁴)) - s²)`.
pub fn two_noise_k0_det(g: f64, beta0_tilde: f64, beta3_tilde: f64) -> f64 {
    let s = beta0_tilde + beta3_tilde;
    let d = beta0_tilde - beta3_tilde;
    let g2 = g * g;
    let g4 = g2 * g2;
    let h = s * s / 4.0 - 1.0;
    h * h
        + d * d * g4 / (16.0 * (1.0 + g4)) * ((g4 * d * d + 32.0 * g2) / (4.0 * (1.0 + g4)) - s * s)
}

/// Reduced covariance (modes 1, 2) at `κ = 1`, in terms of
/// `ĝ = (1 + g²)/g⁴`.
pub fn two_noise_k1_closed_form(
    g: f64,
    beta0_tilde: f64,
    beta3_tilde: f64,
) -> Result<CovarianceMatrix> {
    let p = TwoNoiseParams::new(1.0, g, beta0_tilde, beta3_tilde)?;
    let (b0, b3) = (p.beta0_tilde, p.beta3_tilde);
    let g2 = g * g;
    let gh = (1.0 + g2) / (g2 * g2);
    let s = b0 + b3;
    let diff = b3 - b0;
    let m = [
        [
            (2.0 + gh) * s - diff,
            (1.0 + gh) * s,
            2.0 * g2 * gh * b0,
            g2 * gh * diff,
        ],
        [
            (1.0 + gh) * s,
            (2.0 + gh) * s + diff,
            -g2 * gh * diff,
            2.0 * g2 * gh * b3,
        ],
        [
            2.0 * g2 * gh * b0,
            -g2 * gh * diff,
            (2.0 + gh) * s - diff,
            -(1.0 + gh) * s,
        ],
        [
            g2 * gh * diff,
            2.0 * g2 * gh * b3,
            -(1.0 + gh) * s,
            (2.0 + gh) * s + diff,
        ],
    ];
    CovarianceMatrix::new(RealMatrix::from_fn(4, 4, |i, j| 0.5 * m[i][j]))
}

/// Sufficient condition for entanglement at `κ = 1` and large enough `g`:
/// `2(β̃₀ + β̃₃ - 1)² - (β̃₀ - β̃₃)² < 6`.
pub fn two_noise_big_g_condition(beta0_tilde: f64, beta3_tilde: f64) -> bool {
    let s = beta0_tilde + beta3_tilde - 1.0;
    let d = beta0_tilde - beta3_tilde;
    2.0 * s * s - d * d < 6.0
}

/// `det S̃` at `κ = 1`, `β̃₀ = β̃₃ = b`:
/// `(b⁴(2g⁴+1)² - 2b²(4g⁸+4g⁶+7g⁴+4g²+2) + g⁸) / g⁸`.
pub fn equal_temp_det(b: f64, g: f64) -> f64 {
    let g2 = g * g;
    let g4 = g2 * g2;
    let g8 = g4 * g4;
    let b2 = b * b;
    let q = 2.0 * g4 + 1.0;
    (b2 * b2 * q * q - 2.0 * b2 * (4.0 * g8 + 4.0 * g4 * g2 + 7.0 * g4 + 4.0 * g2 + 2.0) + g8) / g8
}

/// `(b ∓ √(2b(b-1)(1+2b-b²))) / (2b² - 2b - 1)`, the roots in `g²` of
/// [`equal_temp_det`]. `None` where the discriminant is negative or the
/// denominator vanishes.
pub fn equal_temp_g2_bounds(b: f64) -> Option<(f64, f64)> {
    let disc = 2.0 * b * (b - 1.0) * (-b * b + 2.0 * b + 1.0);
    let den = 2.0 * b * b - 2.0 * b - 1.0;
    if disc < 0.0 || den == 0.0 {
        return None;
    }
    let r = libm::sqrt(disc);
    let (x, y) = ((b - r) / den, (b + r) / den);
    Some((x.min(y), x.max(y)))
}

/// Largest `b` at which the equal-temperature state is entangled for the
/// given `g`: `(1+g²+g⁴ + √((1+g²+g⁴)² + g⁴(1+2g⁴))) / (1+2g⁴)`.
pub fn equal_temp_boundary_b(g: f64) -> f64 {
    let g2 = g * g;
    let g4 = g2 * g2;
    let a = 1.0 + g2 + g4;
    (a + libm::sqrt(a * a + g4 * (1.0 + 2.0 * g4))) / (1.0 + 2.0 * g4)
}

/// Equal-temperature entanglement at `κ = 1`:
///
/// 1. `1 < b <= (1+√3)/2`: every `g`;
/// 2. `(1+√3)/2 < b <= 2`: `g²` below the upper root;
/// 3. `2 < b < 1+√2`: `g²` between the two roots;
/// 4. `b >= 1+√2`: never.
pub fn two_noise_equal_temp_region(b: f64, g: f64) -> Result<bool> {
    require_finite("b", b)?;
    require_coupling(g)?;
    if !(b > 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "need b > 1, got {b}"
        )));
    }
    let g2 = g * g;
    let sqrt3 = libm::sqrt(3.0);
    let sqrt2 = libm::sqrt(2.0);
    if b <= (1.0 + sqrt3) / 2.0 {
        return Ok(true);
    }
    if b >= 1.0 + sqrt2 {
        return Ok(false);
    }
    let Some((lo, hi)) = equal_temp_g2_bounds(b) else {
        return Ok(false);
    };
    if b <= 2.0 {
        Ok(g2 < hi)
    } else {
        Ok(lo < g2 && g2 < hi)
    }
}

/// Solutions `S₁`, `S_δ` of the Lyapunov equation for the diffusions
/// `C₁ = diag(1,0,0,1,1,0,0,1)` and `C_δ = diag(1,0,0,-1,1,0,0,-1)`, so
/// that `S = (β̃₀+β̃₃)/2 S₁ + (β̃₀-β̃₃)/2 S_δ`.
pub fn temperature_decomposition(kappa: f64, g: f64) -> Result<(RealMatrix, RealMatrix)> {
    if !two_noise_stability(kappa, g)? {
        return Err(Error::OutsideRegion(alloc::format!(
            "unstable drift at kappa={kappa}, g={g}"
        )));
    }
    let z = explicit_drift(kappa, g)?;
    let c1 = RealMatrix::from_diag(&[1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
    let cd = RealMatrix::from_diag(&[1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, -1.0]);
    Ok((solve_lyapunov(&z, &c1)?, solve_lyapunov(&z, &cd)?))
}
