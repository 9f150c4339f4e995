//! Sweep configuration: a TOML file, overridden by command-line flags.
//!
//! ```toml
//! model = "two_noise_equal_temp"
//! dead_band = 1e-3
//!
//! [[axes]]
//! name = "g"
//! min = 0.05
//! max = 4.0
//! steps = 200
//! spacing = "log"
//!
//! [fixed]
//! kappa = 1.0
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use gqms_core::entanglement::PartitionSpec;
use gqms_core::gaussian::{build_drift_diffusion, DriftDiffusion, GklsGenerator};
use gqms_core::models::single::heuristic_beta_tilde;
use gqms_core::models::{ModelPoint, SingleNoiseParams, TwoNoiseParams};
use gqms_core::numkit::ComplexMatrix;
use gqms_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const MAX_AXES: usize = 3;
pub const DEFAULT_DEAD_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    SingleNoise,
    TwoNoise,
    TwoNoiseEqualTemp,
    CustomGenerator,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SingleNoise => "single_noise",
            Self::TwoNoise => "two_noise",
            Self::TwoNoiseEqualTemp => "two_noise_equal_temp",
            Self::CustomGenerator => "custom_generator",
        }
    }

    /// Names accepted by `--set` and `--axis`. `g2` is `g²` and excludes
    /// `g`.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Self::SingleNoise => &["kappa", "g", "g2", "beta_tilde"],
            Self::TwoNoise => &["kappa", "g", "g2", "beta0_tilde", "beta3_tilde"],
            Self::TwoNoiseEqualTemp => &["kappa", "g", "g2", "b"],
            Self::CustomGenerator => &[],
        }
    }

    fn temperatures(self) -> &'static [&'static str] {
        match self {
            Self::SingleNoise => &["beta_tilde"],
            Self::TwoNoise => &["beta0_tilde", "beta3_tilde"],
            Self::TwoNoiseEqualTemp => &["b"],
            Self::CustomGenerator => &[],
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        [
            Self::SingleNoise,
            Self::TwoNoise,
            Self::TwoNoiseEqualTemp,
            Self::CustomGenerator,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown model {s:?}; expected single_noise, two_noise, two_noise_equal_temp or custom_generator"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    /// Grid values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp(),
                }
            })
            .collect()
    }

    fn check(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(format!("axis {}: {msg}", self.name)));
        if self.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", self.steps));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return bad("bounds must be finite".into());
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0 && self.max > 0.0) {
            return bad("log spacing needs positive bounds".into());
        }
        Ok(())
    }
}

/// `name:min:max:steps[:log|:linear]`
impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let usage =
            || CliError::Usage(format!("bad axis {s:?}; expected name:min:max:steps[:log]"));
        if !(4..=5).contains(&parts.len()) || parts[0].is_empty() {
            return Err(usage());
        }
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| usage());
        let spacing = match parts.get(4).map(|x| x.trim()) {
            None | Some("linear") | Some("lin") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(_) => return Err(usage()),
        };
        Ok(Self {
            name: parts[0].trim().to_string(),
            min: num(parts[1])?,
            max: num(parts[2])?,
            steps: parts[3].trim().parse().map_err(|_| usage())?,
            spacing,
        })
    }
}

/// Which result columns are filled in; switched-off columns are left
/// blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputFlags {
    pub stability: bool,
    pub ppt: bool,
    pub det_witness: bool,
    pub log_negativity: bool,
    pub analytic_region: bool,
}

impl Default for OutputFlags {
    fn default() -> Self {
        Self {
            stability: true,
            ppt: true,
            det_witness: true,
            log_negativity: true,
            analytic_region: true,
        }
    }
}

/// Explicit generator for `custom_generator`. Matrices are row lists;
/// missing imaginary parts are zero. `v` and `u` are `m x d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub omega_re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_im: Option<Vec<Vec<f64>>>,
    pub v_re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_im: Option<Vec<Vec<f64>>>,
    pub u_re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_re: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_im: Option<Vec<f64>>,
    /// Zero-based modes whose reduced state is tested for entanglement.
    #[serde(default = "default_pair")]
    pub pair: [usize; 2],
}

fn default_pair() -> [usize; 2] {
    [0, 1]
}

fn complex_matrix(
    what: &str,
    re: &[Vec<f64>],
    im: Option<&Vec<Vec<f64>>>,
    rows: usize,
    cols: usize,
) -> CliResult<ComplexMatrix> {
    let shape_err =
        || CliError::Config(format!("generator.{what}: expected {rows}x{cols} entries"));
    let check = |m: &[Vec<f64>]| m.len() == rows && m.iter().all(|r| r.len() == cols);
    if !check(re) || im.is_some_and(|m| !check(m)) {
        return Err(shape_err());
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(re[i][j], im.map_or(0.0, |m| m[i][j]))
    }))
}

impl GeneratorSpec {
    pub fn modes(&self) -> usize {
        self.omega_re.len()
    }

    pub fn generator(&self) -> CliResult<GklsGenerator> {
        let d = self.modes();
        let m = self.v_re.len();
        let zero = vec![vec![0.0; d]; d];
        let omega = complex_matrix("omega", &self.omega_re, self.omega_im.as_ref(), d, d)?;
        let kappa = complex_matrix(
            "kappa",
            self.kappa_re.as_deref().unwrap_or(&zero),
            self.kappa_im.as_ref(),
            d,
            d,
        )?;
        let v = complex_matrix("v", &self.v_re, self.v_im.as_ref(), m, d)?;
        let u = complex_matrix("u", &self.u_re, self.u_im.as_ref(), m, d)?;
        let part = |x: &Option<Vec<f64>>, what: &str| -> CliResult<Vec<f64>> {
            match x {
                None => Ok(vec![0.0; d]),
                Some(v) if v.len() == d => Ok(v.clone()),
                Some(_) => Err(CliError::Config(format!(
                    "generator.{what}: expected {d} entries"
                ))),
            }
        };
        let (zr, zi) = (
            part(&self.zeta_re, "zeta_re")?,
            part(&self.zeta_im, "zeta_im")?,
        );
        let zeta = zr
            .iter()
            .zip(&zi)
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect();
        Ok(GklsGenerator::new(omega, kappa, v, u, zeta)?)
    }

    pub fn partition(&self) -> CliResult<PartitionSpec> {
        Ok(PartitionSpec::pair(
            self.modes(),
            self.pair[0],
            self.pair[1],
        )?)
    }
}

/// A fully resolved parameter point.
#[derive(Debug, Clone)]
pub enum PointSpec {
    Model(ModelPoint),
    Custom {
        system: DriftDiffusion,
        partition: PartitionSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub outputs: OutputFlags,
    #[serde(default = "default_dead_band")]
    pub dead_band: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    /// single_noise only: take `β̃ = 1 + |κ|(1-|κ|)/4` at every point
    /// instead of a `beta_tilde` parameter.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub heuristic_temperature: bool,
}

fn default_dead_band() -> f64 {
    DEFAULT_DEAD_BAND
}

/// Flag overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub sets: Vec<(String, f64)>,
    pub axes: Vec<Axis>,
    pub dead_band: Option<f64>,
}

/// `name=value`
pub fn parse_assignment(s: &str) -> CliResult<(String, f64)> {
    let usage = || CliError::Usage(format!("bad assignment {s:?}; expected name=value"));
    let (k, v) = s.split_once('=').ok_or_else(usage)?;
    let k = k.trim();
    if k.is_empty() {
        return Err(usage());
    }
    Ok((k.to_string(), v.trim().parse().map_err(|_| usage())?))
}

impl SweepConfig {
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            axes: Vec::new(),
            fixed: BTreeMap::new(),
            outputs: OutputFlags::default(),
            dead_band: DEFAULT_DEAD_BAND,
            generator: None,
            heuristic_temperature: false,
        }
    }

    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Builds a config from an optional file plus overrides, then
    /// validates it. Either the file or `--model` must name the model.
    pub fn resolve(file: Option<&Path>, ov: Overrides) -> CliResult<Self> {
        let mut cfg = match (file, ov.model) {
            (Some(p), _) => Self::load(p)?,
            (None, Some(m)) => Self::new(m),
            (None, None) => {
                return Err(CliError::Usage(
                    "either --config or --model is required".into(),
                ))
            }
        };
        if let Some(m) = ov.model {
            if m != cfg.model {
                cfg.model = m;
            }
        }
        if let Some(a) = ov
            .axes
            .iter()
            .find(|a| ov.sets.iter().any(|(k, _)| *k == a.name))
        {
            return Err(CliError::Usage(format!(
                "{} given by both --set and --axis",
                a.name
            )));
        }
        for (k, v) in ov.sets {
            cfg.axes.retain(|a| a.name != k);
            cfg.fixed.insert(k, v);
        }
        for axis in ov.axes {
            cfg.fixed.remove(&axis.name);
            match cfg.axes.iter_mut().find(|a| a.name == axis.name) {
                Some(slot) => *slot = axis,
                None => cfg.axes.push(axis),
            }
        }
        if let Some(d) = ov.dead_band {
            cfg.dead_band = d;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let err = |m: String| Err(CliError::Config(m));
        if !(self.dead_band.is_finite() && self.dead_band >= 0.0) {
            return err(format!(
                "dead_band must be finite and non-negative, got {}",
                self.dead_band
            ));
        }
        if self.model == ModelKind::CustomGenerator {
            let Some(spec) = &self.generator else {
                return err("custom_generator needs a [generator] table".into());
            };
            if !self.axes.is_empty() || !self.fixed.is_empty() {
                return err("custom_generator takes no axes or fixed parameters".into());
            }
            spec.generator()?;
            spec.partition()?;
            return Ok(());
        }
        if self.generator.is_some() {
            return err(format!(
                "[generator] is only valid for custom_generator, not {}",
                self.model
            ));
        }
        if self.heuristic_temperature && self.model != ModelKind::SingleNoise {
            return err(format!(
                "heuristic_temperature is only valid for single_noise, not {}",
                self.model
            ));
        }
        if self.axes.len() > MAX_AXES {
            return err(format!("at most {MAX_AXES} axes, got {}", self.axes.len()));
        }
        let allowed = self.model.parameters();
        let names: Vec<&str> = self
            .axes
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.fixed.keys().map(String::as_str))
            .collect();
        for (i, n) in names.iter().enumerate() {
            if !allowed.contains(n) {
                return err(format!(
                    "{n:?} is not a parameter of {}; expected one of {allowed:?}",
                    self.model
                ));
            }
            if names[..i].contains(n) {
                return err(format!("parameter {n:?} given twice"));
            }
        }
        if names.contains(&"g") && names.contains(&"g2") {
            return err("give either g or g2, not both".into());
        }
        let mut required: Vec<&str> = vec!["g|g2"];
        if self.model != ModelKind::TwoNoiseEqualTemp {
            required.push("kappa");
        }
        if self.heuristic_temperature {
            if names.contains(&"beta_tilde") {
                return err("beta_tilde cannot be set together with heuristic_temperature".into());
            }
        } else {
            required.extend(self.model.temperatures());
        }
        for r in required {
            if !r.split('|').any(|x| names.contains(&x)) {
                return err(format!(
                    "parameter {r} is missing; set it with --set or an axis"
                ));
            }
        }
        for axis in &self.axes {
            axis.check()?;
            for v in axis.values() {
                check_value(self.model, &axis.name, v)?;
            }
        }
        for (k, v) in &self.fixed {
            check_value(self.model, k, *v)?;
        }
        Ok(())
    }

    /// Number of grid points (1 for a zero-axis config).
    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    /// Row-major coordinates of every grid point; the last axis varies
    /// fastest.
    pub fn grid(&self) -> Vec<Vec<(String, f64)>> {
        let values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let total = self.grid_size();
        (0..total)
            .map(|mut idx| {
                let mut coords = vec![(String::new(), 0.0); self.axes.len()];
                for (k, axis) in self.axes.iter().enumerate().rev() {
                    let i = idx % axis.steps;
                    idx /= axis.steps;
                    coords[k] = (axis.name.clone(), values[k][i]);
                }
                coords
            })
            .collect()
    }

    /// All parameter values at a grid point.
    pub fn parameters_at(&self, coords: &[(String, f64)]) -> BTreeMap<String, f64> {
        let mut p = self.fixed.clone();
        for (k, v) in coords {
            p.insert(k.clone(), *v);
        }
        p
    }

    pub fn point(&self, coords: &[(String, f64)]) -> CliResult<PointSpec> {
        if self.model == ModelKind::CustomGenerator {
            let spec = self
                .generator
                .as_ref()
                .ok_or_else(|| CliError::Config("missing [generator]".into()))?;
            return Ok(PointSpec::Custom {
                system: build_drift_diffusion(&spec.generator()?)?,
                partition: spec.partition()?,
            });
        }
        let p = self.parameters_at(coords);
        let get = |k: &str| {
            p.get(k)
                .copied()
                .ok_or_else(|| CliError::Config(format!("parameter {k} is missing")))
        };
        let g = match p.get("g2") {
            Some(g2) => g2.sqrt(),
            None => get("g")?,
        };
        let point = match self.model {
            ModelKind::SingleNoise => {
                let kappa = get("kappa")?;
                let beta_tilde = if self.heuristic_temperature {
                    heuristic_beta_tilde(kappa)
                } else {
                    get("beta_tilde")?
                };
                ModelPoint::Single(SingleNoiseParams::new(kappa, g, beta_tilde)?)
            }
            ModelKind::TwoNoise => ModelPoint::Two(TwoNoiseParams::new(
                get("kappa")?,
                g,
                get("beta0_tilde")?,
                get("beta3_tilde")?,
            )?),
            ModelKind::TwoNoiseEqualTemp => ModelPoint::Two(TwoNoiseParams::equal_temperature(
                p.get("kappa").copied().unwrap_or(1.0),
                g,
                get("b")?,
            )?),
            ModelKind::CustomGenerator => unreachable!(),
        };
        Ok(PointSpec::Model(point))
    }
}

fn check_value(model: ModelKind, name: &str, v: f64) -> CliResult<()> {
    let bad = |why: &str| Err(CliError::Config(format!("{name}={v}: {why}")));
    if !v.is_finite() {
        return bad("must be finite");
    }
    match name {
        "g" if v == 0.0 => bad("coupling must be non-zero"),
        "g2" if v <= 0.0 => bad("g2 must be positive"),
        "b" if v <= 1.0 => bad("need b > 1"),
        n if model.temperatures().contains(&n) && v < 1.0 => bad("need beta_tilde >= 1"),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a: Axis = "g:0.05:4:200:log".parse().unwrap();
        assert_eq!(a.spacing, Spacing::Log);
        assert_eq!(a.steps, 200);
        let v = a.values();
        assert_eq!((v[0], v[199]), (0.05, 4.0));
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert!("g:0:1".parse::<Axis>().is_err());
        assert!("g:0:1:x".parse::<Axis>().is_err());
        assert!("g:0:1:3:cubic".parse::<Axis>().is_err());
    }

    #[test]
    fn grid_is_row_major() {
        let mut cfg = SweepConfig::new(ModelKind::SingleNoise);
        cfg.axes.push("kappa:0:0.2:3".parse().unwrap());
        cfg.axes.push("g:1:2:2".parse().unwrap());
        cfg.fixed.insert("beta_tilde".into(), 2.0);
        cfg.validate().unwrap();
        let g = cfg.grid();
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], vec![("kappa".into(), 0.0), ("g".into(), 2.0)]);
        assert_eq!(g[2][0].1, 0.1);
    }

    #[test]
    fn heuristic_temperature_follows_kappa() {
        let cfg = SweepConfig::from_toml_str(
            "model = \"single_noise\"\nheuristic_temperature = true\n[fixed]\nkappa = 0.5\ng = 0.1\n",
        )
        .unwrap();
        cfg.validate().unwrap();
        match cfg.point(&[]).unwrap() {
            PointSpec::Model(ModelPoint::Single(p)) => assert_eq!(p.beta_tilde, 1.0625),
            _ => unreachable!(),
        }
        let mut both = cfg.clone();
        both.fixed.insert("beta_tilde".into(), 1.1);
        assert!(both.validate().is_err());
        let mut two = SweepConfig::new(ModelKind::TwoNoiseEqualTemp);
        two.heuristic_temperature = true;
        assert!(two.validate().is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = SweepConfig::new(ModelKind::SingleNoise);
        cfg.fixed.insert("kappa".into(), 0.5);
        cfg.fixed.insert("g".into(), 0.1);
        assert!(cfg.validate().is_err(), "beta_tilde missing");
        cfg.fixed.insert("beta_tilde".into(), 0.5);
        assert!(cfg.validate().is_err(), "beta_tilde < 1");
        cfg.fixed.insert("beta_tilde".into(), 1.5);
        cfg.validate().unwrap();
        cfg.fixed.insert("g2".into(), 1.0);
        assert!(cfg.validate().is_err(), "g and g2");
        cfg.fixed.remove("g2");
        cfg.fixed.insert("b".into(), 2.0);
        assert!(cfg.validate().is_err(), "foreign parameter");
        cfg.fixed.remove("b");
        cfg.axes.push("g:-1:1:3".parse().unwrap());
        cfg.fixed.remove("g");
        assert!(cfg.validate().is_err(), "axis crosses g = 0");
    }

    #[test]
    fn overrides_replace_axes_and_values() {
        let text = r#"
            model = "single_noise"
            [[axes]]
            name = "kappa"
            min = 0.1
            max = 0.5
            steps = 5
            [fixed]
            g = 0.1
            beta_tilde = 1.05
        "#;
        let dir = std::env::temp_dir().join(format!("gqms-cfg-{}", std::process::id()));
        std::fs::write(&dir, text).unwrap();
        let cfg = SweepConfig::resolve(
            Some(&dir),
            Overrides {
                sets: vec![("kappa".into(), 0.5)],
                axes: vec!["g:0.1:0.2:2".parse().unwrap()],
                ..Default::default()
            },
        )
        .unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(cfg.axes.len(), 1);
        assert_eq!(cfg.axes[0].name, "g");
        assert_eq!(cfg.fixed["kappa"], 0.5);
        assert!(!cfg.fixed.contains_key("g"));
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = SweepConfig::new(ModelKind::TwoNoiseEqualTemp);
        cfg.axes.push("b:1.01:2.6:5".parse().unwrap());
        cfg.fixed.insert("g".into(), 1.0);
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(SweepConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn equal_temperature_defaults_to_unit_squeezing() {
        let mut cfg = SweepConfig::new(ModelKind::TwoNoiseEqualTemp);
        cfg.fixed.insert("g".into(), 1.0);
        cfg.fixed.insert("b".into(), 1.5);
        cfg.validate().unwrap();
        match cfg.point(&[]).unwrap() {
            PointSpec::Model(ModelPoint::Two(p)) => assert_eq!(p.kappa, 1.0),
            other => panic!("{other:?}"),
        }
    }
}
