//! CSV and JSON region files.
//!
//! CSV columns are the axis names followed by [`RESULT_COLUMNS`]. Reals
//! carry 17 significant digits so a parse reproduces them bit for bit.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};
use crate::sweep::{RegionSample, Status};

pub const RESULT_COLUMNS: [&str; 7] = [
    "stable",
    "entangled",
    "det_tilde",
    "min_eig_tilde",
    "log_negativity",
    "analytic_entangled",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::Usage(format!(
                "unknown format {s:?}; expected csv or json"
            ))),
        }
    }
}

/// Shortest form with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(out: W, axes: &[String], samples: &[RegionSample]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Internal(format!("csv: {e}"));
    let header: Vec<&str> = axes
        .iter()
        .map(String::as_str)
        .chain(RESULT_COLUMNS)
        .collect();
    w.write_record(&header).map_err(io)?;
    for r in samples {
        let mut row: Vec<String> = r.coordinates.iter().map(|(_, v)| format_real(*v)).collect();
        row.extend([
            opt_bool(r.stable),
            opt_bool(r.entangled),
            opt_real(r.det_tilde),
            opt_real(r.min_eig_tilde),
            opt_real(r.log_negativity),
            opt_bool(r.analytic_entangled),
            r.status.as_str().to_string(),
        ]);
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    Ok(())
}

pub fn csv_string(axes: &[String], samples: &[RegionSample]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, axes, samples)?;
    String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))
}

/// Parses a file written by [`write_csv`].
pub fn parse_csv(text: &str) -> CliResult<Vec<RegionSample>> {
    let bad = |m: String| CliError::Config(format!("region csv: {m}"));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let n_axes = header
        .len()
        .checked_sub(RESULT_COLUMNS.len())
        .filter(|n| header[*n..] == RESULT_COLUMNS)
        .ok_or_else(|| bad(format!("unexpected header {header:?}")))?;
    let real = |s: &str| -> CliResult<Option<f64>> {
        if s.is_empty() {
            return Ok(None);
        }
        s.parse()
            .map(Some)
            .map_err(|_| bad(format!("bad number {s:?}")))
    };
    let boolean = |s: &str| -> CliResult<Option<bool>> {
        match s {
            "" => Ok(None),
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            _ => Err(bad(format!("bad flag {s:?}"))),
        }
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let f: Vec<&str> = rec.iter().collect();
        let mut coordinates = Vec::with_capacity(n_axes);
        for (name, v) in header.iter().zip(&f[..n_axes]) {
            let v = real(v)?.ok_or_else(|| bad(format!("blank coordinate {name}")))?;
            coordinates.push((name.clone(), v));
        }
        let r = &f[n_axes..];
        out.push(RegionSample {
            coordinates,
            stable: boolean(r[0])?,
            entangled: boolean(r[1])?,
            det_tilde: real(r[2])?,
            min_eig_tilde: real(r[3])?,
            log_negativity: real(r[4])?,
            analytic_entangled: boolean(r[5])?,
            status: Status::parse(r[6]).ok_or_else(|| bad(format!("bad status {:?}", r[6])))?,
        });
    }
    Ok(out)
}

pub fn sample_json(r: &RegionSample) -> Value {
    let coords: Map<String, Value> = r
        .coordinates
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    json!({
        "coordinates": coords,
        "stable": r.stable,
        "entangled": r.entangled,
        "det_tilde": r.det_tilde,
        "min_eig_tilde": r.min_eig_tilde,
        "log_negativity": r.log_negativity,
        "analytic_entangled": r.analytic_entangled,
        "status": r.status,
    })
}

#[derive(Serialize)]
struct Document<'a> {
    version: &'a str,
    config: &'a SweepConfig,
    records: Vec<Value>,
}

pub fn json_string(cfg: &SweepConfig, samples: &[RegionSample]) -> CliResult<String> {
    let doc = Document {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        records: samples.iter().map(sample_json).collect(),
    };
    let mut s =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses a file written by [`json_string`]; coordinates come back in
/// the axis order of the echoed config.
pub fn parse_json(text: &str) -> CliResult<(SweepConfig, Vec<RegionSample>)> {
    let bad = |m: String| CliError::Config(format!("region json: {m}"));
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let cfg: SweepConfig =
        serde_json::from_value(v["config"].clone()).map_err(|e| bad(e.to_string()))?;
    let records = v["records"]
        .as_array()
        .ok_or_else(|| bad("records missing".into()))?;
    let mut out = Vec::with_capacity(records.len());
    for rec in records {
        let mut coordinates = Vec::new();
        for axis in &cfg.axes {
            let x = rec["coordinates"][&axis.name]
                .as_f64()
                .ok_or_else(|| bad(format!("coordinate {} missing", axis.name)))?;
            coordinates.push((axis.name.clone(), x));
        }
        let status = rec["status"]
            .as_str()
            .and_then(Status::parse)
            .ok_or_else(|| bad("bad status".into()))?;
        out.push(RegionSample {
            coordinates,
            stable: rec["stable"].as_bool(),
            entangled: rec["entangled"].as_bool(),
            det_tilde: rec["det_tilde"].as_f64(),
            min_eig_tilde: rec["min_eig_tilde"].as_f64(),
            log_negativity: rec["log_negativity"].as_f64(),
            analytic_entangled: rec["analytic_entangled"].as_bool(),
            status,
        });
    }
    Ok((cfg, out))
}

/// Writes to `path`, or to stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Internal(format!("stdout: {e}")))
        }
    }
}
