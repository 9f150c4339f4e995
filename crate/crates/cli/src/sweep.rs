//! Point evaluation and parallel grid sweeps.

use gqms_core::entanglement::{partial_trace, ppt_check, EntanglementVerdict};
use gqms_core::gaussian::{stationary_covariance, CovarianceMatrix, DriftDiffusion};
use gqms_core::models::evaluate;
use gqms_core::numkit::{eigenvalues, Spectrum, Stability};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{OutputFlags, PointSpec, SweepConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Unstable,
    SolverFailed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Unstable => "unstable",
            Self::SolverFailed => "solver_failed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(Self::Ok),
            "unstable" => Some(Self::Unstable),
            "solver_failed" => Some(Self::SolverFailed),
            _ => None,
        }
    }
}

/// One grid point. Absent values are written as blanks (CSV) or nulls
/// (JSON), never as NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSample {
    pub coordinates: Vec<(String, f64)>,
    pub stable: Option<bool>,
    pub entangled: Option<bool>,
    pub det_tilde: Option<f64>,
    pub min_eig_tilde: Option<f64>,
    pub log_negativity: Option<f64>,
    pub analytic_entangled: Option<bool>,
    pub status: Status,
}

impl RegionSample {
    fn failed(coordinates: Vec<(String, f64)>) -> Self {
        Self {
            coordinates,
            stable: None,
            entangled: None,
            det_tilde: None,
            min_eig_tilde: None,
            log_negativity: None,
            analytic_entangled: None,
            status: Status::SolverFailed,
        }
    }
}

/// Everything computed for one point; shared by `analyze` and `sweep`.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub system: DriftDiffusion,
    pub spectrum: Spectrum,
    pub stationary: Option<CovarianceMatrix>,
    pub reduced: Option<CovarianceMatrix>,
    pub witnesses: Option<EntanglementVerdict>,
    pub analytic_entangled: Option<bool>,
}

impl PointAnalysis {
    pub fn stable(&self) -> bool {
        self.stationary.is_some()
    }
}

pub fn analyze_point(spec: &PointSpec) -> CliResult<PointAnalysis> {
    match spec {
        PointSpec::Model(point) => {
            let a = evaluate(point)?;
            Ok(PointAnalysis {
                system: a.system,
                spectrum: a.spectrum,
                stationary: a.stationary,
                reduced: a.reduced,
                witnesses: a.verdict.witnesses,
                analytic_entangled: a.verdict.analytic_entangled,
            })
        }
        PointSpec::Custom { system, partition } => {
            let spectrum = eigenvalues(system.drift())?;
            if spectrum.stability() != Stability::Stable {
                return Ok(PointAnalysis {
                    system: system.clone(),
                    spectrum,
                    stationary: None,
                    reduced: None,
                    witnesses: None,
                    analytic_entangled: None,
                });
            }
            let stationary = stationary_covariance(system)?;
            let reduced = partial_trace(&stationary, partition)?;
            let witnesses = ppt_check(&reduced)?;
            Ok(PointAnalysis {
                system: system.clone(),
                spectrum,
                stationary: Some(stationary),
                reduced: Some(reduced),
                witnesses: Some(witnesses),
                analytic_entangled: None,
            })
        }
    }
}

fn on<T>(flag: bool, v: Option<T>) -> Option<T> {
    v.filter(|_| flag)
}

/// Projects an analysis onto the output schema.
pub fn sample_from(
    coordinates: Vec<(String, f64)>,
    a: &PointAnalysis,
    flags: &OutputFlags,
) -> RegionSample {
    let stable = a.stable();
    let w = a.witnesses;
    let finite = w.is_none_or(|w| {
        w.det_tilde.is_finite() && w.min_eig_tilde.is_finite() && w.log_negativity.is_finite()
    });
    if !finite || (stable && w.is_none()) {
        return RegionSample::failed(coordinates);
    }
    RegionSample {
        coordinates,
        stable: on(flags.stability, Some(stable)),
        entangled: on(flags.ppt, w.map(|w| w.entangled())),
        det_tilde: on(flags.det_witness, w.map(|w| w.det_tilde)),
        min_eig_tilde: on(flags.ppt, w.map(|w| w.min_eig_tilde)),
        log_negativity: on(flags.log_negativity, w.map(|w| w.log_negativity)),
        analytic_entangled: on(flags.analytic_region, a.analytic_entangled),
        status: if stable { Status::Ok } else { Status::Unstable },
    }
}

/// Evaluates one grid point. Numerical failures become
/// `status = solver_failed`; parameter errors propagate.
pub fn evaluate_sample(cfg: &SweepConfig, coords: &[(String, f64)]) -> CliResult<RegionSample> {
    let spec = cfg.point(coords)?;
    match analyze_point(&spec) {
        Ok(a) => Ok(sample_from(coords.to_vec(), &a, &cfg.outputs)),
        Err(e) if e.exit_code() == 2 => Ok(RegionSample::failed(coords.to_vec())),
        Err(e) => Err(e),
    }
}

/// `--jobs`, else `GQMS_JOBS`, else the available parallelism.
pub fn resolve_jobs(flag: Option<usize>) -> CliResult<usize> {
    let jobs = match flag {
        Some(j) => j,
        None => match std::env::var("GQMS_JOBS") {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::Usage(format!("GQMS_JOBS={v:?} is not a positive integer"))
            })?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(jobs)
}

/// Evaluates the whole grid on `jobs` workers. The result is in grid
/// order whatever the scheduling.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> CliResult<Vec<RegionSample>> {
    let grid = cfg.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    pool.install(|| {
        grid.par_iter()
            .map(|c| evaluate_sample(cfg, c))
            .collect::<CliResult<Vec<_>>>()
    })
}

/// Counts for the end-of-run summary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub points: usize,
    pub ok: usize,
    pub unstable: usize,
    pub solver_failed: usize,
    pub entangled: usize,
    pub analytic_checked: usize,
    /// Numeric and analytic verdicts differ away from the analytic
    /// boundary.
    pub disagreements: usize,
    /// Differences explained by a boundary within `dead_band`.
    pub dead_band_disagreements: usize,
}

/// Compares numeric and analytic verdicts. A disagreement counts as
/// a dead-band case when shifting any parameter by `±dead_band` flips the
/// analytic verdict.
pub fn summarize(cfg: &SweepConfig, samples: &[RegionSample]) -> SweepSummary {
    let mut s = SweepSummary {
        points: samples.len(),
        ..Default::default()
    };
    for r in samples {
        match r.status {
            Status::Ok => s.ok += 1,
            Status::Unstable => s.unstable += 1,
            Status::SolverFailed => s.solver_failed += 1,
        }
        if r.entangled == Some(true) {
            s.entangled += 1;
        }
        let (Some(num), Some(ana)) = (r.entangled, r.analytic_entangled) else {
            continue;
        };
        s.analytic_checked += 1;
        if num != ana {
            if near_analytic_boundary(cfg, &r.coordinates, ana) {
                s.dead_band_disagreements += 1;
            } else {
                s.disagreements += 1;
            }
        }
    }
    s
}

fn near_analytic_boundary(cfg: &SweepConfig, coords: &[(String, f64)], verdict: bool) -> bool {
    let base = cfg.parameters_at(coords);
    for name in base.keys() {
        for sign in [-1.0, 1.0] {
            let mut shifted = coords.to_vec();
            let v = base[name] + sign * cfg.dead_band;
            match shifted.iter_mut().find(|(k, _)| k == name) {
                Some(slot) => slot.1 = v,
                None => shifted.push((name.clone(), v)),
            }
            let flipped = cfg
                .point(&shifted)
                .ok()
                .and_then(|p| match p {
                    PointSpec::Model(m) => m.analytic_entangled().ok().flatten(),
                    PointSpec::Custom { .. } => None,
                })
                .is_some_and(|a| a != verdict);
            if flipped {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ModelKind, SweepConfig};

    fn single(kappa: f64, g: f64, b: f64) -> SweepConfig {
        let mut cfg = SweepConfig::new(ModelKind::SingleNoise);
        cfg.fixed.insert("kappa".into(), kappa);
        cfg.fixed.insert("g".into(), g);
        cfg.fixed.insert("beta_tilde".into(), b);
        cfg
    }

    #[test]
    fn entangled_point() {
        let r = evaluate_sample(&single(0.5, 0.1, 1.05), &[]).unwrap();
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.entangled, Some(true));
        assert_eq!(r.analytic_entangled, Some(true));
        assert!(r.det_tilde.unwrap() < 0.0);
    }

    #[test]
    fn unstable_point_has_blank_witnesses() {
        let r = evaluate_sample(&single(0.9, 1.0, 1.5), &[]).unwrap();
        assert_eq!(r.status, Status::Unstable);
        assert_eq!(r.stable, Some(false));
        assert_eq!(
            (r.entangled, r.det_tilde, r.log_negativity),
            (None, None, None)
        );
    }

    #[test]
    fn output_flags_blank_columns() {
        let mut cfg = single(0.5, 0.1, 1.05);
        cfg.outputs.log_negativity = false;
        cfg.outputs.analytic_region = false;
        let r = evaluate_sample(&cfg, &[]).unwrap();
        assert_eq!((r.log_negativity, r.analytic_entangled), (None, None));
        assert!(r.det_tilde.is_some());
    }

    #[test]
    fn jobs_resolution() {
        assert_eq!(resolve_jobs(Some(3)).unwrap(), 3);
        assert!(resolve_jobs(Some(0)).is_err());
    }

    #[test]
    fn summary_counts_statuses() {
        let mut cfg = single(0.5, 0.1, 1.05);
        cfg.fixed.remove("kappa");
        cfg.axes.push("kappa:0.3:0.95:6".parse().unwrap());
        cfg.validate().unwrap();
        let samples = run_sweep(&cfg, 2).unwrap();
        let s = summarize(&cfg, &samples);
        assert_eq!(s.points, 6);
        assert_eq!(s.ok + s.unstable + s.solver_failed, 6);
        assert_eq!(s.disagreements, 0);
    }
}
