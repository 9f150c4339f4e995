//! Oracle-equivalence and property suites behind `gqms selftest`.
//!
//! Every suite is deterministic (fixed seeds) and independent, so they
//! run in parallel and report in a fixed order.

use std::fmt::Write as _;
use std::time::Instant;

use gqms_core::entanglement::{
    det_is_negative, det_threshold, det_witness, partial_trace, ppt_check, ppt_tilde_matrix,
    PartitionSpec,
};
use gqms_core::gaussian::{
    complex_to_real, evolve_state, stationary_covariance, weyl_evolution_factor, CovarianceMatrix,
    GaussianState,
};
use gqms_core::models::single::{
    beta_star, beta_star_threshold, coefficient_positivity_conditions, crossover_kappa,
    differing_entries, entangling_g2_bounds, heuristic_beta_tilde, perturbed_closed_form,
    single_noise_closed_form, single_noise_closed_form_uncorrected, single_noise_entangled,
    single_noise_stability, single_noise_system, single_noise_tilde_charpoly,
    single_noise_tilde_det,
};
use gqms_core::models::two::{
    equal_temp_boundary_b, equal_temp_g2_bounds, temperature_decomposition,
    two_noise_equal_temp_region, two_noise_k0_det, two_noise_stability, two_noise_system,
};
use gqms_core::models::{evaluate, ModelPoint, SingleNoiseParams, TwoNoiseParams};
use gqms_core::numkit::{
    eigenvalues, hermitian_eigenvalues, polynomial_roots_real_coeffs, solve_lyapunov,
    stationary_integral_oracle, symmetric_eigenvalues, RealMatrix, Stability,
};
use gqms_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::DEFAULT_DEAD_BAND;
use crate::error::{CliError, CliResult};

/// Entry shifted by the closed-form fault injection.
pub const FAULT_SHIFT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, Default)]
pub struct SelftestOptions {
    pub quick: bool,
    /// One-based `(row, col)` of the closed-form entry to perturb.
    pub fault: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub suites: Vec<SuiteOutcome>,
    pub seconds: f64,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn table(&self) -> String {
        let w = self.suites.iter().map(|s| s.name.len()).max().unwrap_or(5);
        let mut t = String::new();
        let _ = writeln!(t, "{:<w$}  result  checks   time  detail", "suite");
        for s in &self.suites {
            let _ = writeln!(
                t,
                "{:<w$}  {:<6}  {:>6}  {:>5.2}s  {}",
                s.name,
                if s.passed { "PASS" } else { "FAIL" },
                s.checks,
                s.seconds,
                s.detail
            );
        }
        let failed = self.suites.iter().filter(|s| !s.passed).count();
        let _ = writeln!(
            t,
            "{} suites, {} failed, {:.2}s",
            self.suites.len(),
            failed,
            self.seconds
        );
        t
    }
}

/// Running count of checks plus the first few failure messages.
#[derive(Debug, Default)]
struct Tally {
    checks: usize,
    failures: usize,
    messages: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < 3 {
                self.messages.push(msg());
            }
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

struct Ctx {
    quick: bool,
    fault: Option<(usize, usize)>,
}

impl Ctx {
    fn size(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

type SuiteFn = fn(&Ctx, &mut Tally) -> CliResult<()>;

const SUITES: &[(&str, SuiteFn)] = &[
    ("generator_cross_check", generator_cross_check),
    ("thermal_fixed_point", thermal_fixed_point),
    ("closed_form_vs_solver", closed_form_vs_solver),
    ("uncorrected_closed_form", uncorrected_closed_form),
    ("quadrature_vs_lyapunov", quadrature_vs_lyapunov),
    ("stability_criteria", stability_criteria),
    ("temperature_threshold", temperature_threshold),
    ("crossover_constant", crossover_constant),
    ("two_noise_k0_separable", two_noise_k0_separable),
    ("equal_temperature_regimes", equal_temperature_regimes),
    ("linearity_decomposition", linearity_decomposition),
    ("coefficient_positivity_mc", coefficient_positivity_mc),
    ("witness_equivalence", witness_equivalence),
    ("predicate_vs_ppt", predicate_vs_ppt),
    ("tilde_charpoly", tilde_charpoly),
    ("physical_states", physical_states),
    ("dynamics", dynamics),
    ("weyl_factor", weyl_factor),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

pub fn cmd_selftest(opts: SelftestOptions, jobs: usize) -> CliResult<SelftestReport> {
    if let Some((r, c)) = opts.fault {
        if !(1..=6).contains(&r) || !(1..=6).contains(&c) {
            return Err(CliError::Usage(format!(
                "fault coordinates ({r},{c}) outside 1..=6"
            )));
        }
    }
    let ctx = Ctx {
        quick: opts.quick,
        fault: opts.fault,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let suites = pool.install(|| {
        SUITES
            .par_iter()
            .map(|(name, f)| run_suite(name, *f, &ctx))
            .collect()
    });
    Ok(SelftestReport {
        suites,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_suite(name: &'static str, f: SuiteFn, ctx: &Ctx) -> SuiteOutcome {
    let start = Instant::now();
    let mut tally = Tally::default();
    let result = f(ctx, &mut tally);
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match result {
        Err(e) => (false, format!("error: {e}")),
        Ok(()) if tally.failures > 0 => (
            false,
            format!("{} failed: {}", tally.failures, tally.messages.join("; ")),
        ),
        Ok(()) => (true, tally.notes.join("; ")),
    };
    SuiteOutcome {
        name,
        passed,
        checks: tally.checks,
        detail,
        seconds,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Uniform on `(lo, hi]`.
fn open_closed(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    hi - (hi - lo) * r.gen::<f64>()
}

fn single(kappa: f64, g: f64, b: f64) -> CliResult<SingleNoiseParams> {
    Ok(SingleNoiseParams::new(kappa, g, b)?)
}

/// `(κ, g)` with `g² = frac · (1-κ²)/|κ|`, capped at `g = 3`: the grid
/// fills the stable region of the single-noise model.
fn stable_single_grid(n_kappa: usize, fracs: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for kappa in linspace(-0.95, 0.95, n_kappa) {
        for &f in fracs {
            let bound = if kappa == 0.0 {
                9.0
            } else {
                ((1.0 - kappa * kappa) / kappa.abs()).min(9.0)
            };
            out.push((kappa, (f * bound).sqrt()));
        }
    }
    out
}

fn reduced_of(point: &ModelPoint) -> CliResult<Option<CovarianceMatrix>> {
    Ok(evaluate(point)?.reduced)
}

/// Whether shifting any parameter by `±band` flips the analytic verdict.
fn in_dead_band(point: &ModelPoint, band: f64) -> bool {
    let Ok(Some(base)) = point.analytic_entangled() else {
        return false;
    };
    let shifted: Vec<ModelPoint> = match *point {
        ModelPoint::Single(p) => {
            let mut v = Vec::new();
            for s in [-band, band] {
                let cands = [
                    (p.kappa + s, p.g, p.beta_tilde),
                    (p.kappa, p.g + s, p.beta_tilde),
                    (p.kappa, p.g, p.beta_tilde + s),
                ];
                v.extend(
                    cands
                        .into_iter()
                        .filter_map(|(k, g, b)| SingleNoiseParams::new(k, g, b).ok())
                        .map(ModelPoint::Single),
                );
            }
            v
        }
        ModelPoint::Two(p) => {
            let mut v = Vec::new();
            for s in [-band, band] {
                let cands = [
                    (p.kappa, p.g + s, p.beta0_tilde, p.beta3_tilde),
                    (p.kappa, p.g, p.beta0_tilde + s, p.beta3_tilde + s),
                    (p.kappa, p.g, p.beta0_tilde + s, p.beta3_tilde),
                    (p.kappa, p.g, p.beta0_tilde, p.beta3_tilde + s),
                ];
                v.extend(
                    cands
                        .into_iter()
                        .filter_map(|(k, g, b0, b3)| TwoNoiseParams::new(k, g, b0, b3).ok())
                        .map(ModelPoint::Two),
                );
            }
            v
        }
    };
    shifted
        .iter()
        .any(|q| matches!(q.analytic_entangled(), Ok(Some(v)) if v != base))
}

fn generator_cross_check(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(11);
    for _ in 0..ctx.size(200, 30) {
        let (k, g, b0, b3) = (
            r.gen_range(-2.0..2.0),
            r.gen_range(0.05..3.0),
            open_closed(&mut r, 1.0, 4.0),
            open_closed(&mut r, 1.0, 4.0),
        );
        let s = single_noise_system(&single(k, g, b0)?);
        t.check(s.is_ok(), || {
            format!("single ({k},{g},{b0}): {:?}", s.err())
        });
        let d = two_noise_system(&TwoNoiseParams::new(k, g, b0, b3)?);
        t.check(d.is_ok(), || {
            format!("two ({k},{g},{b0},{b3}): {:?}", d.err())
        });
    }
    Ok(())
}

fn thermal_fixed_point(_: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(1);
    for _ in 0..20 {
        let g = r.gen_range(0.1..3.0) * if r.gen::<bool>() { 1.0 } else { -1.0 };
        let b = open_closed(&mut r, 1.0, 3.0);
        let s = stationary_covariance(&single_noise_system(&single(0.0, g, b)?)?)?;
        let err = s.matrix().max_abs_diff(&RealMatrix::identity(6).scale(b));
        t.check(err <= 1e-10, || {
            format!("g={g} beta={b}: max error {err:e}")
        });
    }
    Ok(())
}

fn closed_form_vs_solver(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let n = ctx.size(20, 6);
    let grid = stable_single_grid(n, &linspace(0.05, 0.95, n));
    let mut worst: f64 = 0.0;
    for &b in &[1.05, 1.5, 2.5] {
        for &(k, g) in &grid {
            let p = single(k, g, b)?;
            let solver = stationary_covariance(&single_noise_system(&p)?)?;
            let closed = match ctx.fault {
                Some((row, col)) => perturbed_closed_form(&p, row - 1, col - 1, FAULT_SHIFT)?,
                None => single_noise_closed_form(&p)?,
            };
            let rel = closed
                .matrix()
                .relative_frobenius_diff(solver.matrix(), 1.0);
            worst = worst.max(rel);
            t.check(rel <= 1e-9, || {
                let at = differing_entries(closed.matrix(), solver.matrix(), 1e-9);
                format!("(kappa,g,beta)=({k:.4},{g:.4},{b}) rel {rel:.2e}, entries {at:?}")
            });
        }
    }
    t.note(format!("max relative error {worst:.1e}"));
    Ok(())
}

/// The uncorrected closed form differs from the solver in
/// exactly three entries; anything else means the transcription or the
/// solver changed.
fn uncorrected_closed_form(_: &Ctx, t: &mut Tally) -> CliResult<()> {
    const KNOWN: [(usize, usize); 3] = [(2, 5), (5, 1), (5, 2)];
    for (k, g, b) in [(0.5, 0.1, 1.05), (0.3, 0.8, 1.5), (-0.6, 0.4, 2.0)] {
        let p = single(k, g, b)?;
        let solver = stationary_covariance(&single_noise_system(&p)?)?;
        let uncorrected = single_noise_closed_form_uncorrected(&p)?;
        let at = differing_entries(&uncorrected, solver.matrix(), 1e-9);
        t.check(at == KNOWN, || format!("({k},{g},{b}): differs at {at:?}"));
    }
    t.note(format!("uncorrected form differs only at {KNOWN:?}"));
    Ok(())
}

/// `Z = M - (λ_max(sym M) + margin) I` is stable with decay at least
/// `margin`; `C = B Bᵀ / n` is PSD. `M` has entries of variance `1/n`,
/// keeping `|Z| h` small enough for the fixed quadrature step.
pub fn random_stable_pair(r: &mut ChaCha8Rng, n: usize) -> CliResult<(RealMatrix, RealMatrix)> {
    let w = (3.0 / n as f64).sqrt();
    let m = RealMatrix::from_fn(n, n, |_, _| w * r.gen_range(-1.0..1.0));
    let top = *symmetric_eigenvalues(&m.symmetrize())?
        .last()
        .expect("non-empty");
    let shift = top + r.gen_range(0.2..1.0);
    let z = &m - &RealMatrix::identity(n).scale(shift);
    let b = RealMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    let c = (&b * &b.transpose()).scale(1.0 / n as f64).symmetrize();
    Ok((z, c))
}

fn quadrature_vs_lyapunov(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for (n, count) in [(6, ctx.size(100, 10)), (8, ctx.size(50, 5))] {
        for i in 0..count {
            let (z, c) = random_stable_pair(&mut r, n)?;
            let s = solve_lyapunov(&z, &c)?;
            let o = stationary_integral_oracle(&z, &c, 1e-10 * c.frobenius_norm().max(1.0))?;
            let rel = o.relative_frobenius_diff(&s, f64::MIN_POSITIVE);
            worst = worst.max(rel);
            t.check(rel <= 1e-6, || {
                format!("{n}x{n} instance {i}: rel {rel:.2e}")
            });
        }
    }
    t.note(format!("max relative error {worst:.1e}"));
    Ok(())
}

fn stability_criteria(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let n = ctx.size(100, 30);
    let band = DEFAULT_DEAD_BAND;
    let mut skipped = 0;
    for k in linspace(-1.5, 1.5, n) {
        for g in linspace(-3.0, 3.0, n) {
            if k != 0.0 && ((1.0 - k * k) / k.abs() - g * g).abs() < band {
                skipped += 1;
            } else {
                let analytic = single_noise_stability(k, g)?;
                let z = single_noise_system(&single(k, g, 1.5)?)?;
                let numeric = eigenvalues(z.drift())?.stability() == Stability::Stable;
                t.check(analytic == numeric, || {
                    format!("single (kappa,g)=({k},{g}): criterion {analytic}, spectrum {numeric}")
                });
            }
        }
    }
    for k in linspace(-2.0, 2.0, n) {
        for g in linspace(-2.0, 2.0, n) {
            if ((1.0 + g * g * g * g).min(2.0) - k * k).abs() < band {
                skipped += 1;
                continue;
            }
            let analytic = two_noise_stability(k, g)?;
            let z = two_noise_system(&TwoNoiseParams::new(k, g, 1.5, 1.5)?)?;
            let numeric = eigenvalues(z.drift())?.stability() == Stability::Stable;
            t.check(analytic == numeric, || {
                format!("two (kappa,g)=({k},{g}): criterion {analytic}, spectrum {numeric}")
            });
        }
    }
    t.note(format!("{skipped} boundary points skipped"));
    Ok(())
}

fn single_det_negative(k: f64, g: f64, b: f64) -> CliResult<bool> {
    let s = reduced_of(&ModelPoint::Single(single(k, g, b)?))?
        .ok_or_else(|| CliError::Internal(format!("unstable at ({k},{g})")))?;
    Ok(det_is_negative(det_witness(&s)?, &s))
}

/// `β̃` where `det S̃` changes sign, by bisection on `[lo, hi]`.
pub fn bisect_beta_transition(k: f64, g: f64, lo: f64, hi: f64) -> CliResult<f64> {
    let (mut lo, mut hi) = (lo, hi);
    if !single_det_negative(k, g, lo)? || single_det_negative(k, g, hi)? {
        return Err(CliError::Internal(format!(
            "no sign change of det on [{lo}, {hi}] at ({k},{g})"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if single_det_negative(k, g, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn temperature_threshold(_: &Ctx, t: &mut Tally) -> CliResult<()> {
    for (k, g) in [(0.5, 0.1), (0.3, 0.5), (0.7, 0.2)] {
        let found = bisect_beta_transition(k, g, 1.0, 3.0)?;
        let expect = beta_star_threshold(k, g)?;
        t.check((found - expect).abs() <= 1e-3, || {
            format!("({k},{g}): bisection {found:.6}, threshold {expect:.6}")
        });
        t.note(format!(
            "({k},{g}) transition {found:.5} = sqrt({:.5})",
            beta_star(k, g)?
        ));
    }
    let b0 = beta_star(0.5, 1e-12)?;
    t.check((b0 - 1.6875).abs() <= 1e-9, || {
        format!("beta_star(0.5, 0) = {b0}")
    });
    Ok(())
}

fn crossover_constant(_: &Ctx, t: &mut Tally) -> CliResult<()> {
    let f = |k: f64| {
        let (a, b) = entangling_g2_bounds(k);
        a - b
    };
    let (mut lo, mut hi) = (0.5, 0.99);
    t.check(f(lo).signum() != f(hi).signum(), || {
        "no crossing on [0.5, 0.99]".into()
    });
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == f(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let found = 0.5 * (lo + hi);
    t.check((found - crossover_kappa()).abs() <= 1e-12, || {
        format!("crossing {found} vs closed form {}", crossover_kappa())
    });
    t.check((found - 0.8349996).abs() <= 1e-6, || {
        format!("crossing {found}")
    });
    t.note(format!("|kappa| = {found:.10}"));
    Ok(())
}

fn two_noise_k0_separable(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let n = ctx.size(10, 4);
    let betas: Vec<f64> = (1..=n).map(|i| 1.0 + 2.0 * i as f64 / n as f64).collect();
    for g in linspace(0.2, 3.0, n) {
        for &b0 in &betas {
            for &b3 in &betas {
                let p = TwoNoiseParams::new(0.0, g, b0, b3)?;
                let s = reduced_of(&ModelPoint::Two(p))?
                    .ok_or_else(|| CliError::Internal("kappa = 0 must be stable".into()))?;
                let v = ppt_check(&s)?;
                t.check(v.separable && v.det_tilde > 0.0, || {
                    format!("(g,b0,b3)=({g},{b0},{b3}): det {:e}", v.det_tilde)
                });
                let formula = two_noise_k0_det(g, b0, b3);
                let rel = (formula - v.det_tilde).abs() / v.det_tilde.abs().max(1.0);
                t.check(rel <= 1e-8, || {
                    format!(
                        "(g,b0,b3)=({g},{b0},{b3}): det formula {formula} vs {}",
                        v.det_tilde
                    )
                });
            }
        }
    }
    Ok(())
}

fn equal_temp_entangled(b: f64, g: f64) -> CliResult<bool> {
    let p = TwoNoiseParams::equal_temperature(1.0, g, b)?;
    let s = reduced_of(&ModelPoint::Two(p))?
        .ok_or_else(|| CliError::Internal(format!("unstable at g={g}")))?;
    Ok(ppt_check(&s)?.entangled())
}

/// Bisection on `x` of a verdict that is `at_lo` at `lo` and flips
/// before `hi`.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> CliResult<bool>) -> CliResult<f64> {
    let at_lo = f(lo)?;
    if f(hi)? == at_lo {
        return Err(CliError::Internal(format!("no transition on [{lo}, {hi}]")));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn equal_temperature_regimes(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let n = ctx.size(200, 40);
    let band = DEFAULT_DEAD_BAND;
    let g2s: Vec<f64> = linspace(-3.0, 2.0, n)
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect();
    for b in [1.2, 1.8, 2.2, 2.5] {
        let roots = equal_temp_g2_bounds(b);
        for &g2 in &g2s {
            if roots.is_some_and(|(lo, hi)| (g2 - lo).abs() < band || (g2 - hi).abs() < band) {
                continue;
            }
            let g = g2.sqrt();
            let numeric = equal_temp_entangled(b, g)?;
            let analytic = two_noise_equal_temp_region(b, g)?;
            t.check(numeric == analytic, || {
                format!("b={b} g2={g2:.4e}: ppt {numeric}, region {analytic}")
            });
            match b {
                1.2 => t.check(numeric, || format!("b=1.2 g2={g2:.3e} separable")),
                2.5 => t.check(!numeric, || format!("b=2.5 g2={g2:.3e} entangled")),
                _ => {}
            }
        }
    }
    let (lo, hi) =
        equal_temp_g2_bounds(2.2).ok_or_else(|| CliError::Internal("no roots at 2.2".into()))?;
    let lo_n = bisect(0.05, 0.5, |g2| equal_temp_entangled(2.2, g2.sqrt()))?;
    let hi_n = bisect(0.5, 2.0, |g2| equal_temp_entangled(2.2, g2.sqrt()))?;
    for (name, analytic, numeric, quoted) in
        [("lower", lo, lo_n, 0.1123), ("upper", hi, hi_n, 0.9158)]
    {
        t.check(
            (numeric - quoted).abs() <= 1e-3 && (analytic - quoted).abs() <= 1e-3,
            || format!("b=2.2 {name} g2 bound: ppt {numeric:.5}, formula {analytic:.5}"),
        );
    }
    let g_star = 2.0 / 3f64.sqrt();
    let b_mid = bisect(1.5, 2.4, |b| equal_temp_entangled(b, g_star))?;
    t.check(
        (b_mid - 2.0).abs() <= 1e-3 && (equal_temp_boundary_b(g_star) - 2.0).abs() <= 1e-12,
        || format!("boundary at g=2/sqrt3: ppt {b_mid:.6}"),
    );
    let b_inf = bisect(1.1, 1.8, |b| equal_temp_entangled(b, 1e3))?;
    let limit = (1.0 + 3f64.sqrt()) / 2.0;
    t.check((b_inf - limit).abs() <= 1e-3, || {
        format!("boundary at g=1e3: ppt {b_inf:.6}")
    });
    t.note(format!(
        "b=2.2 roots ({lo_n:.4}, {hi_n:.4}); b(2/sqrt3)={b_mid:.5}; b(1e3)={b_inf:.5}"
    ));
    Ok(())
}

fn linearity_decomposition(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(9);
    for _ in 0..ctx.size(50, 10) {
        let g: f64 = r.gen_range(0.2..2.0);
        let kmax = (1.0 + g * g * g * g).min(2.0).sqrt() * 0.95;
        let k = r.gen_range(-kmax..kmax);
        let (b0, b3) = (open_closed(&mut r, 1.0, 3.0), open_closed(&mut r, 1.0, 3.0));
        let s = stationary_covariance(&two_noise_system(&TwoNoiseParams::new(k, g, b0, b3)?)?)?;
        let (s1, sd) = temperature_decomposition(k, g)?;
        let recon = &s1.scale((b0 + b3) / 2.0) + &sd.scale((b0 - b3) / 2.0);
        let err = recon.max_abs_diff(s.matrix()) / s.matrix().max_abs().max(1.0);
        t.check(err <= 1e-10, || {
            format!("({k},{g},{b0},{b3}): error {err:e}")
        });
    }
    for g in [0.3, 1.0, 2.5] {
        let (s1, _) = temperature_decomposition(0.0, g)?;
        let err = s1.max_abs_diff(&RealMatrix::identity(8));
        t.check(err <= 1e-10, || format!("kappa=0 g={g}: S1 - I = {err:e}"));
    }
    Ok(())
}

fn coefficient_positivity_mc(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(5);
    let n = ctx.size(10_000, 1_000);
    let mut violations = 0;
    for _ in 0..n {
        let k = loop {
            let k: f64 = r.gen_range(-1.0..1.0);
            if k != 0.0 {
                break k;
            }
        };
        let bound = (1.0 - k * k) / k.abs();
        let g = (bound * (1.0 - r.gen::<f64>())).sqrt();
        let b = open_closed(&mut r, 1.0, 5.0);
        let ok = coefficient_positivity_conditions(k, g, b)?;
        if !ok.iter().all(|x| *x) {
            violations += 1;
        }
        t.check(ok.iter().all(|x| *x), || format!("({k},{g},{b}): {ok:?}"));
    }
    t.note(format!("{n} samples, {violations} violations"));
    Ok(())
}

/// Reduced states on the grids used by the threshold, crossover,
/// separability and equal-temperature suites.
fn witness_grid(ctx: &Ctx) -> CliResult<Vec<ModelPoint>> {
    let mut pts = Vec::new();
    for (k, g) in [(0.5, 0.1), (0.3, 0.5), (0.7, 0.2)] {
        for b in linspace(1.0, 2.0, ctx.size(41, 11)) {
            pts.push(ModelPoint::Single(single(k, g, b)?));
        }
    }
    let n = ctx.size(12, 5);
    for (k, g) in stable_single_grid(n, &linspace(0.05, 0.95, n)) {
        pts.push(ModelPoint::Single(single(k, g, heuristic_beta_tilde(k))?));
    }
    let m = ctx.size(6, 3);
    for g in linspace(0.2, 3.0, m) {
        for b0 in linspace(1.1, 3.0, m) {
            for b3 in linspace(1.1, 3.0, m) {
                pts.push(ModelPoint::Two(TwoNoiseParams::new(0.0, g, b0, b3)?));
            }
        }
    }
    for b in [1.2, 1.8, 2.2, 2.5] {
        for e in linspace(-3.0, 2.0, ctx.size(40, 10)) {
            pts.push(ModelPoint::Two(TwoNoiseParams::equal_temperature(
                1.0,
                10f64.powf(e).sqrt(),
                b,
            )?));
        }
    }
    Ok(pts)
}

/// Asserted outside the parameter dead band and outside the
/// determinant's own tolerance band `|det| <= 1e-9 max(1, |S|^4)`, which
/// is wide for the badly conditioned states at very weak coupling.
fn witness_equivalence(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let (mut skipped, mut det_band) = (0, 0);
    for p in witness_grid(ctx)? {
        let Some(s) = reduced_of(&p)? else { continue };
        if in_dead_band(&p, DEFAULT_DEAD_BAND) {
            skipped += 1;
            continue;
        }
        let v = ppt_check(&s)?;
        if v.det_tilde.abs() <= det_threshold(&s) {
            det_band += 1;
            continue;
        }
        let det_neg = det_is_negative(v.det_tilde, &s);
        let eig_neg = v.entangled();
        let ln_pos = v.log_negativity > 0.0;
        t.check(det_neg == eig_neg && eig_neg == ln_pos, || {
            format!(
                "{p:?}: det {:e}, min eig {:e}, LN {:e}",
                v.det_tilde, v.min_eig_tilde, v.log_negativity
            )
        });
    }
    t.note(format!(
        "{skipped} dead-band points skipped, {det_band} inside the determinant tolerance"
    ));
    Ok(())
}

fn predicate_vs_ppt(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let n = ctx.size(20, 6);
    let mut skipped = 0;
    let mut entangled = 0;
    for (k, g) in stable_single_grid(n, &linspace(0.02, 0.98, n)) {
        for b in [1.0, 1.02, 1.1, 1.3, 1.6] {
            let p = ModelPoint::Single(single(k, g, b)?);
            if in_dead_band(&p, DEFAULT_DEAD_BAND) {
                skipped += 1;
                continue;
            }
            let s = reduced_of(&p)?.ok_or_else(|| CliError::Internal(format!("unstable {p:?}")))?;
            let numeric = ppt_check(&s)?.entangled();
            let analytic = single_noise_entangled(k, g, b)?;
            entangled += usize::from(numeric);
            t.check(numeric == analytic, || {
                format!("(kappa,g,beta)=({k:.4},{g:.4},{b}): ppt {numeric}, predicate {analytic}")
            });
        }
    }
    for k in [0.1, 0.3, 0.5, 0.7, 0.79] {
        for s in [1.0, -1.0] {
            let b = heuristic_beta_tilde(s * k);
            let numeric = reduced_of(&ModelPoint::Single(single(s * k, 0.05, b)?))?
                .map(|r| ppt_check(&r).map(|v| v.entangled()))
                .transpose()?;
            t.check(numeric == Some(true), || {
                format!(
                    "heuristic beta {b:.4} at kappa={} g=0.05 not entangled",
                    s * k
                )
            });
        }
    }
    t.note(format!(
        "{entangled} entangled, {skipped} dead-band points skipped"
    ));
    Ok(())
}

fn tilde_charpoly(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(7);
    for _ in 0..ctx.size(40, 8) {
        let k: f64 = r.gen_range(-0.95..0.95);
        let bound = if k == 0.0 {
            4.0
        } else {
            ((1.0 - k * k) / k.abs()).min(4.0)
        };
        let g = (bound * r.gen_range(0.05..0.95)).sqrt();
        let b = open_closed(&mut r, 1.0, 3.0);
        let p = single(k, g, b)?;
        let s = reduced_of(&ModelPoint::Single(p))?
            .ok_or_else(|| CliError::Internal("unstable".into()))?;
        let mut numeric = hermitian_eigenvalues(&ppt_tilde_matrix(&s)?)?;
        numeric.sort_by(f64::total_cmp);
        let mut roots: Vec<f64> = polynomial_roots_real_coeffs(&single_noise_tilde_charpoly(&p)?)?
            .iter()
            .map(|z: &Complex64| z.re)
            .collect();
        roots.sort_by(f64::total_cmp);
        let scale = numeric.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let err = roots
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        t.check(err <= 1e-8 * scale, || {
            format!("({k},{g},{b}): roots off by {err:e}")
        });
        let det = single_noise_tilde_det(&p)?;
        let num_det = det_witness(&s)?;
        let rel = (det - num_det).abs() / num_det.abs().max(1.0);
        t.check(rel <= 1e-8, || {
            format!("({k},{g},{b}): det {det} vs {num_det}")
        });
    }
    Ok(())
}

fn physical_states(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let n = ctx.size(12, 5);
    let mut pts: Vec<ModelPoint> = Vec::new();
    for (k, g) in stable_single_grid(n, &linspace(0.05, 0.95, n)) {
        for b in [1.0, 1.5, 3.0] {
            pts.push(ModelPoint::Single(single(k, g, b)?));
        }
    }
    for k in linspace(-1.3, 1.3, n) {
        for g in [0.4, 1.0, 2.0] {
            pts.push(ModelPoint::Two(TwoNoiseParams::new(k, g, 1.2, 2.4)?));
        }
    }
    for p in pts {
        let a = evaluate(&p)?;
        let Some(s) = a.stationary else { continue };
        let rep = s.validity()?;
        t.check(rep.valid, || {
            format!("{p:?}: min eig of S - iJ = {:e}", rep.min_eigenvalue)
        });
        let modes = s.modes();
        for i in 0..modes {
            for j in (i + 1)..modes {
                let red = partial_trace(&s, &PartitionSpec::pair(modes, i, j)?)?;
                t.check(red.is_valid()?, || {
                    format!("{p:?}: modes ({i},{j}) invalid")
                });
            }
        }
    }
    Ok(())
}

fn dynamics(_: &Ctx, t: &mut Tally) -> CliResult<()> {
    // Separable start, entangled stationary state.
    let p = single(0.5, 0.1, 1.05)?;
    let dd = single_noise_system(&p)?;
    let vacuum = GaussianState::centered(CovarianceMatrix::vacuum(3))?;
    let zeta = vec![0.0; 6];
    let pair = PartitionSpec::pair(3, 1, 2)?;
    t.check(
        !ppt_check(&partial_trace(vacuum.covariance(), &pair)?)?.entangled(),
        || "vacuum is entangled".into(),
    );
    let times = [
        0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 400.0,
    ];
    let mut verdicts = Vec::new();
    for &time in &times {
        let s = evolve_state(&vacuum, &dd, &zeta, time)?;
        verdicts.push(ppt_check(&partial_trace(s.covariance(), &pair)?)?.entangled());
    }
    let t0 = (0..times.len())
        .find(|&i| verdicts[i..].iter().all(|v| *v))
        .map(|i| times[i]);
    t.check(t0.is_some(), || {
        format!("not eventually entangled: {verdicts:?}")
    });
    if let Some(t0) = t0 {
        t.note(format!("entangled for all scanned t >= {t0}"));
    }

    // Fast-mixing point: convergence and the semigroup property.
    let fast = single_noise_system(&single(0.0, 1.5, 2.0)?)?;
    let stat = stationary_covariance(&fast)?;
    let late = evolve_state(&vacuum, &fast, &zeta, 200.0)?;
    let err = late.covariance().matrix().max_abs_diff(stat.matrix());
    t.check(err <= 1e-6, || {
        format!("fast point t=200: distance {err:e}")
    });
    let once = evolve_state(&vacuum, &fast, &zeta, 3.0)?;
    let twice = evolve_state(
        &evolve_state(&vacuum, &fast, &zeta, 1.25)?,
        &fast,
        &zeta,
        1.75,
    )?;
    let err = once
        .covariance()
        .matrix()
        .max_abs_diff(twice.covariance().matrix());
    t.check(err <= 1e-9, || format!("semigroup defect {err:e}"));
    Ok(())
}

fn weyl_factor(ctx: &Ctx, t: &mut Tally) -> CliResult<()> {
    let mut r = rng(13);
    let points = [(0.05, 1.4, 1.5), (0.0, 1.5, 2.0), (-0.05, 1.3, 1.1)];
    let per = ctx.size(20, 4);
    for (k, g, b) in points {
        let dd = single_noise_system(&single(k, g, b)?)?;
        let s = stationary_covariance(&dd)?;
        for _ in 0..per {
            let z: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                .collect();
            let w = weyl_evolution_factor(&z, 100.0, &dd, &[Complex64::new(0.0, 0.0); 3])?;
            let expect = -0.5 * s.matrix().quadratic_form(&complex_to_real(&z));
            let err = (w.log_amplitude - expect).abs();
            t.check(err <= 1e-6, || {
                format!("({k},{g},{b}) z={z:?}: {} vs {expect}", w.log_amplitude)
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_selftest_passes() {
        let rep = cmd_selftest(
            SelftestOptions {
                quick: true,
                fault: None,
            },
            4,
        )
        .unwrap();
        assert!(rep.passed(), "{}", rep.table());
        assert_eq!(rep.suites.len(), SUITES.len());
    }

    #[test]
    fn fault_is_reported_with_coordinates() {
        let ctx = Ctx {
            quick: true,
            fault: Some((2, 3)),
        };
        let out = run_suite("closed_form_vs_solver", closed_form_vs_solver, &ctx);
        assert!(!out.passed);
        assert!(
            out.detail.contains("(2, 3)") && out.detail.contains("(3, 2)"),
            "{}",
            out.detail
        );
    }

    #[test]
    fn fault_coordinates_are_validated() {
        let opts = SelftestOptions {
            quick: true,
            fault: Some((0, 7)),
        };
        assert!(cmd_selftest(opts, 1).is_err());
    }
}
