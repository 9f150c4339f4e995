//! Property tests for the dense linear algebra.

use gqms_core::numkit::{
    characteristic_polynomial, eigenvalues, expm, finite_gramian, hermitian_eigenvalues,
    hermitian_min_eigenvalue, lyapunov_residual, psd_by_pivoted_cholesky, psd_tolerance,
    solve_lyapunov, stationary_integral_oracle, symmetric_eigenvalues, ComplexMatrix, Lu,
    RealMatrix,
};
use gqms_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(r: &mut ChaCha8Rng, n: usize, scale: f64) -> RealMatrix {
    RealMatrix::from_fn(n, n, |_, _| scale * r.gen_range(-1.0..1.0))
}

/// Drift with every eigenvalue in the open left half plane, and a PSD
/// diffusion.
fn stable_pair(r: &mut ChaCha8Rng, n: usize) -> (RealMatrix, RealMatrix) {
    let m = random_matrix(r, n, (3.0 / n as f64).sqrt());
    let top = *symmetric_eigenvalues(&m.symmetrize())
        .unwrap()
        .last()
        .unwrap();
    let z = &m - &RealMatrix::identity(n).scale(top + r.gen_range(0.2..1.0));
    let b = random_matrix(r, n, 1.0);
    let c = (&b * &b.transpose()).scale(1.0 / n as f64).symmetrize();
    (z, c)
}

fn random_hermitian(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    });
    let h = &a + &a.adjoint();
    h.scale(Complex64::new(0.5, 0.0))
}

fn close(a: &RealMatrix, b: &RealMatrix, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * b.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expm_inverse_and_semigroup(seed: u64, n in 1usize..7, s in 0.0f64..1.5, t in 0.0f64..1.5) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut r, n, 1.0);
        let e = expm(&a).unwrap();
        let inv = expm(&a.scale(-1.0)).unwrap();
        prop_assert!(close(&(&e * &inv), &RealMatrix::identity(n), 1e-12));
        let st = &expm(&a.scale(s)).unwrap() * &expm(&a.scale(t)).unwrap();
        prop_assert!(close(&st, &expm(&a.scale(s + t)).unwrap(), 1e-11));
    }

    #[test]
    fn expm_of_diagonal(d in proptest::collection::vec(-5.0f64..5.0, 1..6)) {
        let e = expm(&RealMatrix::from_diag(&d)).unwrap();
        let expected = RealMatrix::from_diag(&d.iter().map(|x| x.exp()).collect::<Vec<_>>());
        prop_assert!(close(&e, &expected, 1e-13));
    }

    #[test]
    fn eigenvalues_satisfy_vieta(seed: u64, n in 1usize..9) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut r, n, 1.0);
        let spec = eigenvalues(&m).unwrap();
        prop_assert_eq!(spec.eigenvalues.len(), n);
        let sum: Complex64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum.re - m.trace()).abs() <= 1e-10 * n as f64);
        prop_assert!(sum.im.abs() <= 1e-10 * n as f64);
        let prod: Complex64 = spec.eigenvalues.iter().product();
        let det = m.to_complex().determinant().unwrap();
        prop_assert!((prod - det).norm() <= 1e-9 * det.norm().max(1.0));
        // Every eigenvalue is a root of the characteristic polynomial.
        let p = characteristic_polynomial(&m).unwrap();
        let scale: f64 = p.iter().map(|c| c.abs()).sum();
        for z in &spec.eigenvalues {
            let v = p.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
            prop_assert!(v.norm() <= 1e-8 * scale * (1.0 + z.norm()).powi(n as i32));
        }
    }

    #[test]
    fn lu_solves(seed: u64, n in 1usize..10) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = &random_matrix(&mut r, n, 1.0) + &RealMatrix::identity(n).scale(n as f64);
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let b = a.mul_vec(&x);
        let y = Lu::new(&a).unwrap().solve(&b);
        for (u, v) in x.iter().zip(&y) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn lyapunov_solution_is_symmetric_with_small_residual(seed: u64, n in 1usize..9) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (z, c) = stable_pair(&mut r, n);
        let s = solve_lyapunov(&z, &c).unwrap();
        prop_assert_eq!(s.asymmetry(), 0.0);
        prop_assert!(lyapunov_residual(&z, &s, &c) <= 1e-10 * c.frobenius_norm().max(1.0));
        // A PSD right-hand side with a stable drift gives a PSD solution.
        let min = symmetric_eigenvalues(&s).unwrap()[0];
        prop_assert!(min >= -psd_tolerance(s.frobenius_norm()));
    }

    #[test]
    fn cholesky_agrees_with_min_eigenvalue(seed: u64, n in 1usize..7, shift in -2.0f64..2.0) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let h = &random_hermitian(&mut r, n) + &ComplexMatrix::identity(n).scale(Complex64::new(shift, 0.0));
        let min = hermitian_min_eigenvalue(&h).unwrap();
        let tol = psd_tolerance(h.frobenius_norm());
        prop_assume!((min.abs() - tol).abs() > 1e-6);
        prop_assert_eq!(psd_by_pivoted_cholesky(&h).unwrap(), min >= -tol);
    }

    #[test]
    fn hermitian_spectrum_matches_real_embedding(seed: u64, n in 1usize..6) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut r, n);
        let ev = hermitian_eigenvalues(&h).unwrap();
        // The real embedding carries every eigenvalue twice.
        let doubled = symmetric_eigenvalues(&h.real_embedding()).unwrap();
        for (k, x) in ev.iter().enumerate() {
            prop_assert!((doubled[2 * k] - x).abs() <= 1e-10);
            prop_assert!((doubled[2 * k + 1] - x).abs() <= 1e-10);
        }
    }
}

#[test]
fn quadrature_oracle_matches_solver() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 4, 6] {
        for _ in 0..5 {
            let (z, c) = stable_pair(&mut r, n);
            let s = solve_lyapunov(&z, &c).unwrap();
            let o = stationary_integral_oracle(&z, &c, 1e-10).unwrap();
            assert!(o.relative_frobenius_diff(&s, f64::MIN_POSITIVE) <= 1e-6);
        }
    }
}

#[test]
fn finite_gramian_of_scalar_decay() {
    // ∫_0^t e^{-2as} c ds = c (1 - e^{-2at}) / 2a.
    let (a, c, t) = (0.7, 1.3, 2.5);
    let g = finite_gramian(
        &RealMatrix::from_diag(&[-a]),
        &RealMatrix::from_diag(&[c]),
        t,
    )
    .unwrap();
    let exact = c * (1.0 - (-2.0 * a * t).exp()) / (2.0 * a);
    assert!((g[(0, 0)] - exact).abs() <= 1e-12);
}

#[test]
fn lyapunov_rejects_singular_operator() {
    // Eigenvalues -1 and 1 sum to zero.
    let z = RealMatrix::from_diag(&[-1.0, 1.0]);
    assert!(solve_lyapunov(&z, &RealMatrix::identity(2)).is_err());
}
