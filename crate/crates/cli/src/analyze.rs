//! Single-point report.

use std::fmt::Write as _;

use gqms_core::numkit::RealMatrix;
use serde_json::{json, Value};

use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};
use crate::output::{csv_string, sample_json};
use crate::sweep::{analyze_point, sample_from, PointAnalysis, RegionSample};

pub struct Report {
    pub config: SweepConfig,
    pub analysis: PointAnalysis,
    /// Identical to the record a zero-axis sweep of the same config
    /// produces.
    pub sample: RegionSample,
}

pub fn cmd_analyze(config: SweepConfig) -> CliResult<Report> {
    if !config.axes.is_empty() {
        return Err(CliError::Usage(
            "analyze takes a single point; use sweep for axes".into(),
        ));
    }
    config.validate()?;
    let analysis = analyze_point(&config.point(&[])?)?;
    let sample = sample_from(Vec::new(), &analysis, &config.outputs);
    Ok(Report {
        config,
        analysis,
        sample,
    })
}

/// `c` when `m = c·I` to 1e-10 relative.
fn scalar_multiple_of_identity(m: &RealMatrix) -> Option<f64> {
    let c = m[(0, 0)];
    let target = RealMatrix::identity(m.rows()).scale(c);
    (m.max_abs_diff(&target) <= 1e-10 * c.abs().max(1.0)).then_some(c)
}

impl Report {
    /// One-line verdict, e.g. `stable; ENTANGLED; det(S̃)=-1.2e-3`.
    pub fn headline(&self) -> String {
        let a = &self.analysis;
        let (Some(s), Some(w)) = (&a.stationary, &a.witnesses) else {
            return "unstable; no stationary state".into();
        };
        let mut line = format!(
            "stable; {}; det(S̃)={:.6e}",
            if w.entangled() {
                "ENTANGLED"
            } else {
                "separable"
            },
            w.det_tilde
        );
        if let Some(c) = scalar_multiple_of_identity(s.matrix()) {
            let _ = write!(line, "; S = {}·I", fmt_g(c));
        }
        line
    }

    pub fn to_text(&self) -> String {
        let a = &self.analysis;
        let mut t = String::new();
        let _ = writeln!(t, "model: {}", self.config.model);
        let params = self.config.parameters_at(&[]);
        if !params.is_empty() {
            let list: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(t, "parameters: {}", list.join(" "));
        }
        let _ = writeln!(t, "verdict: {}", self.headline());
        block(&mut t, "drift Z", a.system.drift());
        block(&mut t, "diffusion C", a.system.diffusion());
        let _ = writeln!(t, "eigenvalues of Z:");
        for z in a.spectrum.sorted() {
            let _ = writeln!(t, "  {:+.10e} {:+.10e}i", z.re, z.im);
        }
        match (&a.stationary, &a.reduced, &a.witnesses) {
            (Some(s), Some(r), Some(w)) => {
                block(&mut t, "stationary covariance S", s.matrix());
                block(&mut t, "reduced covariance S_red", r.matrix());
                let _ = writeln!(t, "min eig(S̃): {:.10e}", w.min_eig_tilde);
                let _ = writeln!(t, "det(S̃): {:.10e}", w.det_tilde);
                let _ = writeln!(t, "log-negativity: {:.10e}", w.log_negativity);
                let _ = writeln!(t, "valid reduced covariance: {}", w.valid_input);
            }
            _ => {
                let _ = writeln!(
                    t,
                    "no stationary state (max Re λ = {:.6e})",
                    a.spectrum.max_real_part()
                );
            }
        }
        if let Some(p) = a.analytic_entangled {
            let _ = writeln!(
                t,
                "analytic prediction: {}",
                if p { "entangled" } else { "separable" }
            );
        }
        t
    }

    pub fn to_json(&self) -> CliResult<String> {
        let a = &self.analysis;
        let eig: Vec<[f64; 2]> = a.spectrum.sorted().iter().map(|z| [z.re, z.im]).collect();
        let v = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "headline": self.headline(),
            "drift": rows(a.system.drift()),
            "diffusion": rows(a.system.diffusion()),
            "eigenvalues": eig,
            "stationary": a.stationary.as_ref().map(|s| rows(s.matrix())),
            "reduced": a.reduced.as_ref().map(|s| rows(s.matrix())),
            "verdict": a.witnesses.map(|w| json!({
                "separable": w.separable,
                "min_eig_tilde": w.min_eig_tilde,
                "det_tilde": w.det_tilde,
                "log_negativity": w.log_negativity,
                "valid_input": w.valid_input,
            })),
            "analytic_entangled": a.analytic_entangled,
            "sample": sample_json(&self.sample),
        });
        let mut s =
            serde_json::to_string_pretty(&v).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// The zero-axis sweep CSV for this point.
    pub fn to_csv(&self) -> CliResult<String> {
        csv_string(&[], std::slice::from_ref(&self.sample))
    }
}

fn rows(m: &RealMatrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>())
}

fn fmt_g(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn block(t: &mut String, title: &str, m: &RealMatrix) {
    let _ = writeln!(t, "{title}:");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:+.6e}")).collect();
        let _ = writeln!(t, "  {}", row.join(" "));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ModelKind;

    fn single(kappa: f64, g: f64, b: f64) -> SweepConfig {
        let mut cfg = SweepConfig::new(ModelKind::SingleNoise);
        cfg.fixed.insert("kappa".into(), kappa);
        cfg.fixed.insert("g".into(), g);
        cfg.fixed.insert("beta_tilde".into(), b);
        cfg
    }

    #[test]
    fn headlines() {
        let h = cmd_analyze(single(0.5, 0.1, 1.05)).unwrap().headline();
        assert!(h.starts_with("stable; ENTANGLED; det(S̃)=-"), "{h}");
        let h = cmd_analyze(single(0.0, 1.0, 2.0)).unwrap().headline();
        assert!(
            h.starts_with("stable; separable;") && h.ends_with("S = 2·I"),
            "{h}"
        );
        let h = cmd_analyze(single(0.9, 1.0, 2.0)).unwrap().headline();
        assert_eq!(h, "unstable; no stationary state");
    }

    #[test]
    fn rejects_axes() {
        let mut cfg = single(0.5, 0.1, 1.05);
        cfg.fixed.remove("g");
        cfg.axes.push("g:0.1:0.2:2".parse().unwrap());
        assert!(cmd_analyze(cfg).is_err());
    }

    #[test]
    fn text_report_sections() {
        let t = cmd_analyze(single(0.5, 0.1, 1.05)).unwrap().to_text();
        for s in [
            "drift Z:",
            "diffusion C:",
            "eigenvalues of Z:",
            "stationary covariance S:",
            "reduced covariance S_red:",
            "log-negativity",
        ] {
            assert!(t.contains(s), "missing {s}");
        }
        let t = cmd_analyze(single(0.9, 1.0, 2.0)).unwrap().to_text();
        assert!(t.contains("no stationary state"));
    }
}
