//! One reservoir (mode 0) coupled to the squeezed pair (modes 1, 2).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::temperature::noise_rates;
use super::{cross_check, require_beta_tilde, require_coupling, require_finite};
use crate::gaussian::{build_drift_diffusion, CovarianceMatrix, DriftDiffusion, GklsGenerator};
use crate::numkit::{ComplexMatrix, RealMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleNoiseParams {
    pub kappa: f64,
    pub g: f64,
    pub beta_tilde: f64,
}

impl SingleNoiseParams {
    /// `β̃ = 1` is accepted and means zero temperature.
    pub fn new(kappa: f64, g: f64, beta_tilde: f64) -> Result<Self> {
        require_finite("kappa", kappa)?;
        require_coupling(g)?;
        require_beta_tilde("beta_tilde", beta_tilde)?;
        Ok(Self {
            kappa,
            g,
            beta_tilde,
        })
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta_tilde == 1.0
    }

    /// `δ = 1 - κ²`
    pub fn delta(&self) -> f64 {
        1.0 - self.kappa * self.kappa
    }
}

/// Generator with `L_1 = v a_0`, `L_2 = u a_0†` and
/// `H = (g/2)(a_0† a_1 + a_1† a_0) + (1/2)(a_1† a_2 + a_2† a_1)
///    + (κ/4)(a_1†² + a_1² + a_2†² + a_2²)`.
pub fn single_noise_generator(p: &SingleNoiseParams) -> Result<GklsGenerator> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let (v, u) = noise_rates(p.beta_tilde);
    let omega = ComplexMatrix::from_fn(3, 3, |i, j| match (i.min(j), i.max(j)) {
        (0, 1) => r(p.g / 2.0),
        (1, 2) => r(0.5),
        _ => r(0.0),
    });
    let kappa = ComplexMatrix::from_fn(3, 3, |i, j| {
        if i == j && i > 0 {
            r(p.kappa / 2.0)
        } else {
            r(0.0)
        }
    });
    let vm = ComplexMatrix::from_fn(2, 3, |l, k| if l == 0 && k == 0 { r(v) } else { r(0.0) });
    let um = ComplexMatrix::from_fn(2, 3, |l, k| if l == 1 && k == 0 { r(u) } else { r(0.0) });
    GklsGenerator::new(omega, kappa, vm, um, vec![r(0.0); 3])
}

/// The 6x6 pair written out entry by entry.
pub fn single_noise_explicit(p: &SingleNoiseParams) -> Result<DriftDiffusion> {
    let (k, g) = (p.kappa, p.g);
    #[rustfmt::skip]
    let z = RealMatrix::from_rows(&[
        [-1.0, 0.0, 0.0,  0.0,   -g, 0.0],
        [ 0.0, 0.0, 0.0,   -g,    k, -1.0],
        [ 0.0, 0.0, 0.0,  0.0, -1.0,    k],
        [ 0.0,   g, 0.0, -1.0,  0.0,  0.0],
        [   g,   k, 1.0,  0.0,  0.0,  0.0],
        [ 0.0, 1.0,   k,  0.0,  0.0,  0.0],
    ])?
    .scale(0.5);
    let b = p.beta_tilde;
    let c = RealMatrix::from_diag(&[b, 0.0, 0.0, b, 0.0, 0.0]);
    DriftDiffusion::new(z, c)
}

/// Drift/diffusion pair, checked entrywise against the generator route.
pub fn single_noise_system(p: &SingleNoiseParams) -> Result<DriftDiffusion> {
    let explicit = single_noise_explicit(p)?;
    let built = build_drift_diffusion(&single_noise_generator(p)?)?;
    cross_check(&explicit, &built)?;
    Ok(explicit)
}

/// Stable iff `κ = 0`, or `0 < |κ| < 1` and `g² < (1 - κ²)/|κ|`.
pub fn single_noise_stability(kappa: f64, g: f64) -> Result<bool> {
    require_finite("kappa", kappa)?;
    require_coupling(g)?;
    let a = kappa.abs();
    Ok(a == 0.0 || (a < 1.0 && g * g * a < 1.0 - kappa * kappa))
}

/// The two cubic factors of `det(λ - Z)`, highest power first.
pub fn single_noise_charpoly_factors(kappa: f64, g: f64) -> [[f64; 4]; 2] {
    let d = 1.0 - kappa * kappa;
    let g2 = g * g;
    [
        [1.0, 0.5, (d + g2) / 4.0, (d - g2 * kappa) / 8.0],
        [1.0, 0.5, (d + g2) / 4.0, (d + g2 * kappa) / 8.0],
    ]
}

fn require_stable(p: &SingleNoiseParams) -> Result<()> {
    if single_noise_stability(p.kappa, p.g)? {
        Ok(())
    } else {
        Err(Error::OutsideRegion(alloc::format!(
            "unstable drift at kappa={}, g={}",
            p.kappa,
            p.g
        )))
    }
}

/// `β̃ / (δ(δ² - κ²g⁴))`, the common factor of the closed forms.
fn prefactor(p: &SingleNoiseParams) -> f64 {
    let d = p.delta();
    let (k2, g4) = (p.kappa * p.kappa, {
        let g2 = p.g * p.g;
        g2 * g2
    });
    p.beta_tilde / (d * (d * d - k2 * g4))
}

/// Stationary covariance in closed form.
pub fn single_noise_closed_form(p: &SingleNoiseParams) -> Result<CovarianceMatrix> {
    require_stable(p)?;
    let (k, g, d) = (p.kappa, p.g, p.delta());
    let (k2, k3, g2) = (k * k, k * k * k, g * g);
    let a = d - g2; // δ - g²
    let b = d - g2 * k2; // δ - g²κ²
    let upper: [[f64; 6]; 6] = [
        [
            d * d * d + g2 * k2 * a,
            g * k3 * a,
            g * k2 * a,
            -g2 * k3 * a,
            g * k2 * b,
            -g * k * b,
        ],
        [
            0.0,
            d - g2 * k2 * (g2 + k2),
            k * b,
            -g * k2 * b,
            k * (d - g2 * k2 * (1.0 + g2)),
            -k2 * a,
        ],
        [0.0, 0.0, b, -g * k * b, k2 * a, -k * a],
        [
            0.0,
            0.0,
            0.0,
            d * d * d + g2 * k2 * a,
            -g * k3 * a,
            g * k2 * a,
        ],
        [0.0, 0.0, 0.0, 0.0, d - g2 * k2 * (g2 + k2), -k * b],
        [0.0, 0.0, 0.0, 0.0, 0.0, b],
    ];
    let f = prefactor(p);
    CovarianceMatrix::new(RealMatrix::from_fn(6, 6, |i, j| {
        f * upper[i.min(j)][i.max(j)]
    }))
}

/// Closed form with three transcription typos left in, kept so the
/// self-test can show where they sit. It differs from
/// [`single_noise_closed_form`] at (2,5), (5,1) and (5,2) (1-based) and is
/// not symmetric.
pub fn single_noise_closed_form_uncorrected(p: &SingleNoiseParams) -> Result<RealMatrix> {
    require_stable(p)?;
    let (k, g, d) = (p.kappa, p.g, p.delta());
    let (k2, k3, g2) = (k * k, k * k * k, g * g);
    let a = d - g2;
    let b = d - g2 * k2;
    let e = d - g2 * k2 * (g2 + k2);
    let rows: [[f64; 6]; 6] = [
        [
            d * d * d + g2 * k2 * a,
            g * k3 * a,
            g * k2 * a,
            -g2 * k3 * a,
            g * k2 * b,
            -g * k * b,
        ],
        [g * k3 * a, e, k * b, -g * k2 * b, k * e, -k2 * a],
        [
            g * k2 * a,
            k * b,
            b,
            -g * k * b,
            k2 * (1.0 - k2 - g2),
            -k * (1.0 - k2 - g2),
        ],
        [
            -g2 * k3 * a,
            -g * k2 * b,
            -g * k * b,
            d * d * d + g2 * k2 * a,
            -g * k3 * a,
            g * k2 * a,
        ],
        [g * k2 * a, k * e, k2 * a, -g * k3 * a, e, -k * b],
        [-g * k * b, -k2 * a, -k * a, g * k2 * a, -k * b, b],
    ];
    let f = prefactor(p);
    Ok(RealMatrix::from_fn(6, 6, |i, j| f * rows[i][j]))
}

/// Reduced covariance of modes 1 and 2 in closed form.
pub fn single_noise_reduced_closed_form(p: &SingleNoiseParams) -> Result<CovarianceMatrix> {
    require_stable(p)?;
    let (k, g, d) = (p.kappa, p.g, p.delta());
    let (k2, k3, g2) = (k * k, k * k * k, g * g);
    let s11 = 1.0 - k2 - g2 * k2 * (g2 + k2);
    let s12 = k * (1.0 - k2 - g2 * k2);
    let s13 = k * (1.0 - k2) - g2 * k3 * (1.0 + g2);
    let s14 = -k2 * (1.0 - k2 - g2);
    let s22 = 1.0 - k2 - g2 * k2;
    let s23 = k2 * (1.0 - k2 - g2);
    let s24 = -k * (1.0 - k2 - g2);
    let s34 = -k * (1.0 - k2 * (1.0 + g2));
    let m = [
        [s11, s12, s13, s14],
        [s12, s22, s23, s24],
        [s13, s23, s11, s34],
        [s14, s24, s34, s22],
    ];
    let f = p.beta_tilde / (d * (d * d - g2 * g2 * k2));
    CovarianceMatrix::new(RealMatrix::from_fn(4, 4, |i, j| f * m[i][j]))
}

/// Characteristic polynomial `λ⁴ + a₃λ³ + a₂λ² + a₁λ + a₀` of `S̃` built
/// from the reduced closed form, as `[1, a₃, a₂, a₁, a₀]`.
pub fn single_noise_tilde_charpoly(p: &SingleNoiseParams) -> Result<[f64; 5]> {
    require_stable(p)?;
    let (b, d) = (p.beta_tilde, p.delta());
    let (k2, g2) = (p.kappa * p.kappa, p.g * p.g);
    let (k4, g4) = (k2 * k2, g2 * g2);
    let q = 1.0 - (2.0 + g4) * k2 + k4; // = δ² - g⁴κ²
    let a3 = -2.0 * b * (2.0 * d - g2 * k2 * (1.0 + k2 + g2)) / (d * q);
    let a2 = (b * b * (6.0 - (2.0 + g2) * (2.0 + g2) * k2 + (g4 - 2.0) * k4) - 2.0 * d * d * q)
        / (d * d * q);
    let a1 = -b
        * (2.0 * b * b * (2.0 - g2 * k2) + 2.0 * d * (g2 * k4 + (g4 + g2 + 2.0) * k2 - 2.0))
        / (d * d * q);
    Ok([1.0, a3, a2, a1, single_noise_tilde_det(p)?])
}

/// `det S̃` for the reduced stationary state, as a polynomial in `β̃²`.
pub fn single_noise_tilde_det(p: &SingleNoiseParams) -> Result<f64> {
    require_stable(p)?;
    let (b, d) = (p.beta_tilde, p.delta());
    let (k2, g4) = (p.kappa * p.kappa, {
        let g2 = p.g * p.g;
        g2 * g2
    });
    let q = d * d - g4 * k2;
    let b2 = b * b;
    Ok((b2 * b2 - d * (2.0 + 2.0 * k2 - g4 * k2) * b2 + d * d * q) / (d * d * q))
}

/// The two upper bounds on `g²` whose minimum delimits the entangling
/// region: `(δ/|κ|, √max(4δ² - κ⁶, 0) / (|κ|√δ))`. Both are infinite at
/// `κ = 0` and zero for `|κ| >= 1`.
pub fn entangling_g2_bounds(kappa: f64) -> (f64, f64) {
    let a = kappa.abs();
    if a == 0.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    if a >= 1.0 {
        return (0.0, 0.0);
    }
    let d = 1.0 - a * a;
    let k6 = a * a * a * a * a * a;
    (
        d / a,
        libm::sqrt((4.0 * d * d - k6).max(0.0)) / (a * libm::sqrt(d)),
    )
}

/// `|κ|` at which the two bounds of [`entangling_g2_bounds`] cross:
/// `√((5 - √13)/2)`.
pub fn crossover_kappa() -> f64 {
    libm::sqrt((5.0 - libm::sqrt(13.0)) / 2.0)
}

/// Whether some `β̃ > 1` gives an entangled stationary state.
pub fn single_noise_entangled_region(kappa: f64, g: f64) -> Result<bool> {
    require_finite("kappa", kappa)?;
    require_coupling(g)?;
    let a = kappa.abs();
    if !(a > 0.0 && a < 1.0) {
        return Ok(false);
    }
    let (s, e) = entangling_g2_bounds(kappa);
    Ok(g * g < s.min(e))
}

fn require_region(kappa: f64, g: f64) -> Result<()> {
    if single_noise_entangled_region(kappa, g)? {
        Ok(())
    } else {
        Err(Error::OutsideRegion(alloc::format!(
            "no entangling temperature at kappa={kappa}, g={g}"
        )))
    }
}

/// `(1-κ²)(1 + κ² + |κ|√(16 - g⁴κ²(4 - g⁴))/2 - g⁴κ²/2)`, the larger root
/// in `β̃²` of the numerator of [`single_noise_tilde_det`].
pub fn beta_star(kappa: f64, g: f64) -> Result<f64> {
    require_region(kappa, g)?;
    Ok(beta_star_formula(kappa, g))
}

fn beta_star_formula(kappa: f64, g: f64) -> f64 {
    let a = kappa.abs();
    let k2 = a * a;
    let g4 = g * g * g * g;
    (1.0 - k2) * (1.0 + k2 + 0.5 * a * libm::sqrt(16.0 - g4 * k2 * (4.0 - g4)) - g4 * k2 / 2.0)
}

/// Temperature threshold: the stationary state is entangled iff
/// `1 < β̃ < √beta_star`.
pub fn beta_star_threshold(kappa: f64, g: f64) -> Result<f64> {
    Ok(libm::sqrt(beta_star(kappa, g)?))
}

/// Analytic entanglement predicate for the stationary state.
pub fn single_noise_entangled(kappa: f64, g: f64, beta_tilde: f64) -> Result<bool> {
    require_beta_tilde("beta_tilde", beta_tilde)?;
    if !single_noise_entangled_region(kappa, g)? {
        return Ok(false);
    }
    Ok(beta_tilde < libm::sqrt(beta_star_formula(kappa, g)))
}

/// `β̃ = 1 + |κ|(1 - |κ|)/4`, a temperature below the threshold for small
/// `g` when `0 < |κ| < 0.8`. Past the bound crossover the region closes and
/// no temperature entangles.
pub fn heuristic_beta_tilde(kappa: f64) -> f64 {
    let a = kappa.abs();
    1.0 + a * (1.0 - a) / 4.0
}

/// Left-hand sides of the three positivity conditions behind the signs of
/// the `λ²` and `λ` coefficients of [`single_noise_tilde_charpoly`].
pub fn coefficient_positivity_values(kappa: f64, g: f64, beta_tilde: f64) -> Result<[f64; 3]> {
    require_finite("kappa", kappa)?;
    require_finite("g", g)?;
    require_finite("beta_tilde", beta_tilde)?;
    let a = kappa.abs();
    let g2 = g * g;
    if !(a < 1.0 && beta_tilde > 1.0 && g2 > 0.0 && g2 * a < 1.0 - a * a) {
        return Err(Error::OutsideRegion(alloc::format!(
            "need |kappa| < 1, beta_tilde > 1, 0 < g^2 < (1-kappa^2)/|kappa|; got ({kappa}, {g}, {beta_tilde})"
        )));
    }
    let (k2, g4) = (kappa * kappa, g2 * g2);
    let (k4, k6, k8) = (k2 * k2, k2 * k2 * k2, k2 * k2 * k2 * k2);
    let d = 1.0 - k2;
    let b2 = beta_tilde * beta_tilde;
    Ok([
        6.0 - (2.0 + g2) * (2.0 + g2) * k2 + (g4 - 2.0) * k4,
        4.0 + (2.0 - g2) * (2.0 - g2) * k2 - (3.0 * g4 + 14.0) * k4 + 2.0 * (g4 + 4.0) * k6
            - 2.0 * k8,
        2.0 * b2 * (2.0 - g2 * k2) + 2.0 * d * (g2 * k4 + (g4 + g2 + 2.0) * k2 - 2.0),
    ])
}

pub fn coefficient_positivity_conditions(kappa: f64, g: f64, beta_tilde: f64) -> Result<[bool; 3]> {
    Ok(coefficient_positivity_values(kappa, g, beta_tilde)?.map(|v| v > 0.0))
}

/// Reduced closed form with one entry (and its mirror) shifted; used to
/// check that the oracle comparisons notice a transcription error.
pub fn perturbed_closed_form(
    p: &SingleNoiseParams,
    row: usize,
    col: usize,
    shift: f64,
) -> Result<CovarianceMatrix> {
    let mut m = single_noise_closed_form(p)?.into_matrix();
    if row >= 6 || col >= 6 {
        return Err(Error::IndexOutOfRange {
            index: row.max(col),
            modes: 6,
        });
    }
    m[(row, col)] += shift;
    if row != col {
        m[(col, row)] += shift;
    }
    CovarianceMatrix::new(m)
}

/// Coordinates (1-based) where two matrices differ by more than `tol`
/// relative to the larger's max entry.
pub fn differing_entries(a: &RealMatrix, b: &RealMatrix, tol: f64) -> Vec<(usize, usize)> {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    let mut out = Vec::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if (a[(i, j)] - b[(i, j)]).abs() > tol * scale {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::stationary_covariance;

    fn p(k: f64, g: f64, b: f64) -> SingleNoiseParams {
        SingleNoiseParams::new(k, g, b).unwrap()
    }

    #[test]
    fn explicit_pair_at_kappa_zero() {
        let dd = single_noise_system(&p(0.0, 1.0, 2.0)).unwrap();
        assert_eq!(dd.drift()[(0, 4)], -0.5);
        assert_eq!(dd.drift()[(4, 0)], 0.5);
        assert_eq!(
            dd.diffusion()
                .max_abs_diff(&RealMatrix::from_diag(&[2.0, 0.0, 0.0, 2.0, 0.0, 0.0])),
            0.0
        );
    }

    #[test]
    fn parameter_validation() {
        assert!(SingleNoiseParams::new(0.1, 0.0, 1.5).is_err());
        assert!(SingleNoiseParams::new(0.1, 1.0, 0.9).is_err());
        assert!(SingleNoiseParams::new(0.1, 1.0, 1.0)
            .unwrap()
            .is_zero_temperature());
        assert!(single_noise_stability(0.5, 0.0).is_err());
    }

    #[test]
    fn stability_examples() {
        assert!(single_noise_stability(0.0, 7.0).unwrap());
        assert!(single_noise_stability(0.5, libm::sqrt(1.49)).unwrap());
        assert!(!single_noise_stability(0.5, libm::sqrt(1.51)).unwrap());
        assert!(!single_noise_stability(1.0, 0.01).unwrap());
    }

    #[test]
    fn closed_form_matches_solver() {
        let q = p(0.3, 0.5, 1.1);
        let s = stationary_covariance(&single_noise_system(&q).unwrap()).unwrap();
        let f = single_noise_closed_form(&q).unwrap();
        assert!(s.matrix().relative_frobenius_diff(f.matrix(), 1.0) < 1e-12);
    }

    #[test]
    fn uncorrected_differs_only_at_the_known_entries() {
        let q = p(0.3, 0.5, 1.2);
        let a = single_noise_closed_form_uncorrected(&q).unwrap();
        let b = single_noise_closed_form(&q).unwrap();
        assert_eq!(
            differing_entries(&a, b.matrix(), 1e-12),
            [(2, 5), (5, 1), (5, 2)]
        );
    }

    #[test]
    fn entry_two_six() {
        let q = p(0.3, 0.5, 1.2);
        let (k, g) = (0.3f64, 0.5f64);
        let d = 1.0 - k * k;
        let want = prefactor(&q) * (-k * k * (d - g * g));
        assert!((single_noise_closed_form(&q).unwrap().matrix()[(1, 5)] - want).abs() < 1e-15);
    }

    #[test]
    fn kappa_zero_is_thermal() {
        let f = single_noise_closed_form(&p(0.0, 1.3, 1.7)).unwrap();
        assert!(f.matrix().max_abs_diff(&RealMatrix::identity(6).scale(1.7)) < 1e-15);
        let r = single_noise_reduced_closed_form(&p(0.0, 1.3, 1.7)).unwrap();
        assert!(r.matrix().max_abs_diff(&RealMatrix::identity(4).scale(1.7)) < 1e-15);
    }

    #[test]
    fn crossover_constant() {
        let k = crossover_kappa();
        assert!((k - 0.8349996).abs() < 1e-6);
        let (a, b) = entangling_g2_bounds(k);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn beta_star_at_small_coupling() {
        let b = beta_star(0.5, 1e-6).unwrap();
        assert!((b - 1.6875).abs() < 1e-10);
        assert!(beta_star(0.9, 0.1).is_err());
    }

    #[test]
    fn no_entanglement_past_the_crossover() {
        for g in [0.01, 0.1, 0.3] {
            assert!(!single_noise_entangled_region(0.9, g).unwrap());
        }
    }

    #[test]
    fn coefficient_positivity_examples() {
        assert_eq!(
            coefficient_positivity_conditions(0.5, 1.0, 1.2).unwrap(),
            [true; 3]
        );
        assert_eq!(
            coefficient_positivity_conditions(0.9, 0.4, 1.01).unwrap(),
            [true; 3]
        );
        assert!(coefficient_positivity_conditions(0.9, 1.0, 1.01).is_err());
    }
}
