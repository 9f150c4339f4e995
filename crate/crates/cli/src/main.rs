use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gqms_cli::analyze::cmd_analyze;
use gqms_cli::config::{parse_assignment, Axis, ModelKind, Overrides, SweepConfig};
use gqms_cli::output::{csv_string, emit, json_string, Format};
use gqms_cli::selftest::{cmd_selftest, SelftestOptions};
use gqms_cli::sweep::{resolve_jobs, run_sweep, summarize};
use gqms_cli::{CliError, CliResult};

/// Stationary states and entanglement of Gaussian open-system models.
#[derive(Parser)]
#[command(name = "gqms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one parameter point.
    Analyze(AnalyzeArgs),
    /// Evaluate a parameter grid and write a region file.
    Sweep(SweepArgs),
    /// Run the oracle and property suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// single_noise | two_noise | two_noise_equal_temp | custom_generator
    #[arg(long)]
    model: Option<String>,
    /// Fixed parameter value, e.g. `--set kappa=0.5`.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    sets: Vec<String>,
}

impl ModelArgs {
    fn overrides(&self) -> CliResult<Overrides> {
        Ok(Overrides {
            model: self
                .model
                .as_deref()
                .map(str::parse::<ModelKind>)
                .transpose()?,
            sets: self
                .sets
                .iter()
                .map(|s| parse_assignment(s))
                .collect::<CliResult<_>>()?,
            ..Default::default()
        })
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// text | json | csv (csv is the one-row zero-axis sweep)
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Grid axis `name:min:max:steps[:log]`; up to three.
    #[arg(long = "axis", value_name = "SPEC")]
    axes: Vec<String>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: GQMS_JOBS, else all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Cap every axis at 11 points.
    #[arg(long)]
    quick: bool,
    /// Parameter shift used to excuse analytic/numeric disagreements
    /// next to a boundary [default: 1e-3]
    #[arg(long)]
    dead_band: Option<f64>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Coarse grids only.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// Shift closed-form entry ROW,COL (one-based) to check that the
    /// comparison catches it.
    #[arg(long, hide = true, value_name = "ROW,COL")]
    inject_fault: Option<String>,
}

const QUICK_STEPS: usize = 11;

fn analyze(a: AnalyzeArgs) -> CliResult<()> {
    let cfg = SweepConfig::resolve(a.model.config.as_deref(), a.model.overrides()?)?;
    let report = cmd_analyze(cfg)?;
    let text = match a.format.as_str() {
        "text" => report.to_text(),
        "json" => report.to_json()?,
        "csv" => report.to_csv()?,
        f => {
            return Err(CliError::Usage(format!(
                "unknown format {f:?}; expected text, json or csv"
            )))
        }
    };
    emit(a.out.as_deref(), &text)
}

fn sweep(a: SweepArgs) -> CliResult<()> {
    let format: Format = a.format.parse()?;
    let jobs = resolve_jobs(a.jobs)?;
    let mut ov = a.model.overrides()?;
    ov.axes = a
        .axes
        .iter()
        .map(|s| s.parse::<Axis>())
        .collect::<CliResult<_>>()?;
    ov.dead_band = a.dead_band;
    let mut cfg = SweepConfig::resolve(a.model.config.as_deref(), ov)?;
    if a.quick {
        for axis in &mut cfg.axes {
            axis.steps = axis.steps.min(QUICK_STEPS);
        }
    }
    let samples = run_sweep(&cfg, jobs)?;
    let text = match format {
        Format::Csv => {
            let names: Vec<String> = cfg.axes.iter().map(|x| x.name.clone()).collect();
            csv_string(&names, &samples)?
        }
        Format::Json => json_string(&cfg, &samples)?,
    };
    emit(a.out.as_deref(), &text)?;
    let s = summarize(&cfg, &samples);
    eprintln!(
        "{} points: {} ok, {} unstable, {} solver_failed; {} entangled; analytic verdict checked at {}, {} disagreements (+{} within dead band {})",
        s.points,
        s.ok,
        s.unstable,
        s.solver_failed,
        s.entangled,
        s.analytic_checked,
        s.disagreements,
        s.dead_band_disagreements,
        cfg.dead_band
    );
    Ok(())
}

fn parse_fault(s: &str) -> CliResult<(usize, usize)> {
    let usage = || CliError::Usage(format!("bad fault {s:?}; expected ROW,COL"));
    let (r, c) = s.split_once(',').ok_or_else(usage)?;
    Ok((
        r.trim().parse().map_err(|_| usage())?,
        c.trim().parse().map_err(|_| usage())?,
    ))
}

/// `Ok(false)` when some suite failed.
fn selftest(a: SelftestArgs) -> CliResult<bool> {
    let opts = SelftestOptions {
        quick: a.quick,
        fault: a.inject_fault.as_deref().map(parse_fault).transpose()?,
    };
    let report = cmd_selftest(opts, resolve_jobs(a.jobs)?)?;
    print!("{}", report.table());
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Selftest(a) => selftest(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
