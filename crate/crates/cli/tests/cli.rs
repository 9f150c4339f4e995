//! End-to-end tests of the `gqms` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use gqms_cli::output::{csv_string, json_string, parse_csv, parse_json};
use gqms_cli::{RegionSample, Status};
use gqms_core::models::single::{crossover_kappa, entangling_g2_bounds};
use gqms_core::models::two::equal_temp_boundary_b;

fn gqms() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gqms"));
    c.env_remove("GQMS_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    gqms().args(args).output().expect("spawn gqms")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

const SMALL_SWEEP: &[&str] = &[
    "sweep",
    "--model",
    "single_noise",
    "--set",
    "beta_tilde=1.05",
    "--axis",
    "kappa:-0.95:0.95:15",
    "--axis",
    "g2:0.001:2:12:log",
];

fn coord(r: &RegionSample, name: &str) -> f64 {
    r.coordinates.iter().find(|(k, _)| k == name).unwrap().1
}

#[test]
fn sweep_output_independent_of_worker_count() {
    let one = ok(&[SMALL_SWEEP, &["--jobs", "1"]].concat());
    let four = ok(&[SMALL_SWEEP, &["--jobs", "4"]].concat());
    assert_eq!(one, four);
    let env = gqms()
        .args(SMALL_SWEEP)
        .env("GQMS_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&env), one);
    assert_eq!(one.lines().count(), 1 + 15 * 12);
}

#[test]
fn csv_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    ok(&[SMALL_SWEEP, &["--out", path.to_str().unwrap()]].concat());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains("NaN") && !text.contains("nan"));
    let samples = parse_csv(&text).unwrap();
    assert_eq!(samples.len(), 180);
    let axes = ["kappa".to_string(), "g2".to_string()];
    assert_eq!(csv_string(&axes, &samples).unwrap(), text);
    assert!(samples.iter().any(|r| r.status == Status::Unstable));
    for r in samples.iter().filter(|r| r.status == Status::Unstable) {
        assert_eq!(
            (r.entangled, r.det_tilde, r.log_negativity),
            (None, None, None)
        );
    }
}

#[test]
fn json_file_round_trips() {
    let out = ok(&[SMALL_SWEEP, &["--format", "json"]].concat());
    let (cfg, samples) = parse_json(&out).unwrap();
    assert_eq!(cfg.axes.len(), 2);
    assert_eq!(json_string(&cfg, &samples).unwrap(), out);
    let csv = ok(SMALL_SWEEP);
    assert_eq!(parse_csv(&csv).unwrap(), samples);
}

#[test]
fn zero_axis_sweep_equals_analyze() {
    for point in [
        &[
            "--model",
            "single_noise",
            "--set",
            "kappa=0.5",
            "--set",
            "g=0.1",
            "--set",
            "beta_tilde=1.05",
        ][..],
        &[
            "--model",
            "single_noise",
            "--set",
            "kappa=0.9",
            "--set",
            "g=1",
            "--set",
            "beta_tilde=1.5",
        ][..],
        &[
            "--model",
            "two_noise_equal_temp",
            "--set",
            "g=1",
            "--set",
            "b=1.2",
        ][..],
        &["--config", &config("custom_pair.toml")][..],
    ] {
        let sweep_csv = ok(&[&["sweep"], point].concat());
        let analyze_csv = ok(&[&["analyze", "--format", "csv"], point].concat());
        assert_eq!(sweep_csv, analyze_csv, "{point:?}");

        let sweep_json: serde_json::Value =
            serde_json::from_str(&ok(&[&["sweep", "--format", "json"], point].concat())).unwrap();
        let analyze_json: serde_json::Value =
            serde_json::from_str(&ok(&[&["analyze", "--format", "json"], point].concat())).unwrap();
        assert_eq!(
            sweep_json["records"][0], analyze_json["sample"],
            "{point:?}"
        );
    }
}

#[test]
fn analyze_headlines() {
    let t = ok(&[
        "analyze",
        "--model",
        "single_noise",
        "--set",
        "kappa=0",
        "--set",
        "g=1",
        "--set",
        "beta_tilde=2",
    ]);
    assert!(
        t.contains("stable; separable;") && t.contains("S = 2·I"),
        "{t}"
    );
    let t = ok(&[
        "analyze",
        "--model",
        "single_noise",
        "--set",
        "kappa=0.9",
        "--set",
        "g=1",
        "--set",
        "beta_tilde=2",
    ]);
    assert!(t.contains("unstable; no stationary state"), "{t}");
    let t = ok(&["analyze", "--config", &config("custom_pair.toml")]);
    assert!(t.contains("stable; ENTANGLED"), "{t}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["sweep", "--help"]), Some(0));
    assert_eq!(code(&["--version"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["analyze", "--model", "nope"]), Some(1));
    assert_eq!(
        code(&["analyze", "--model", "single_noise", "--set", "kappa=0.5"]),
        Some(1)
    );
    assert_eq!(
        code(&[
            "analyze",
            "--model",
            "single_noise",
            "--set",
            "kappa=0.5",
            "--set",
            "g=0",
            "--set",
            "beta_tilde=2"
        ]),
        Some(1)
    );
    assert_eq!(
        code(&["sweep", "--model", "single_noise", "--axis", "kappa:0:1"]),
        Some(1)
    );
    assert_eq!(
        code(&["analyze", "--config", "/nonexistent/x.toml"]),
        Some(1)
    );
    assert_eq!(code(&[SMALL_SWEEP, &["--jobs", "0"]].concat()), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let unwritable: PathBuf = dir.path().join("missing-dir").join("out.csv");
    assert_eq!(
        code(&[SMALL_SWEEP, &["--out", unwritable.to_str().unwrap()]].concat()),
        Some(1)
    );
    assert_eq!(
        code(&[
            "sweep",
            "--config",
            &config("custom_pair.toml"),
            "--axis",
            "g:0.1:1:3"
        ]),
        Some(1)
    );
}

#[test]
fn quick_selftest_is_fast_and_green() {
    let t = Instant::now();
    let o = run(&["selftest", "--quick"]);
    let secs = t.elapsed().as_secs_f64();
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(secs < 10.0, "quick selftest took {secs} s");
}

#[test]
fn injected_fault_is_located() {
    let o = run(&["selftest", "--quick", "--inject-fault", "2,5"]);
    assert_eq!(o.status.code(), Some(2));
    let all = stdout(&o) + &stderr(&o);
    assert!(all.contains("FAIL"), "{all}");
    assert!(all.contains("(2, 5)") && all.contains("(5, 2)"), "{all}");
    assert_eq!(
        run(&["selftest", "--inject-fault", "9,9"]).status.code(),
        Some(1)
    );
}

#[test]
fn entangled_points_are_stable_with_negative_witness() {
    let out = ok(&[
        "sweep",
        "--config",
        &config("single_noise_regions.toml"),
        "--quick",
    ]);
    let samples = parse_csv(&out).unwrap();
    assert!(samples.iter().any(|r| r.entangled == Some(true)));
    for r in &samples {
        if r.entangled == Some(true) {
            assert_eq!(r.stable, Some(true));
            assert!(r.det_tilde.unwrap() < 0.0, "{r:?}");
            assert!(r.log_negativity.unwrap() > 0.0, "{r:?}");
        }
        if r.entangled == Some(false) {
            assert!(r.log_negativity.unwrap() == 0.0, "{r:?}");
        }
        assert_ne!(r.status, Status::SolverFailed, "{r:?}");
    }
}

/// Largest `b` with an entangled record, after checking the entangled
/// set is an initial segment of the `b` axis.
fn last_entangled_b(column: &[&RegionSample]) -> f64 {
    let flags: Vec<bool> = column.iter().map(|r| r.entangled.unwrap()).collect();
    let n = flags.iter().take_while(|e| **e).count();
    assert!(n > 0 && flags[n..].iter().all(|e| !e), "{flags:?}");
    coord(column[n - 1], "b")
}

fn b_column(text: &str) -> (Vec<RegionSample>, f64) {
    let samples = parse_csv(text).unwrap();
    let cell = coord(&samples[1], "b") - coord(&samples[0], "b");
    (samples, cell)
}

#[test]
fn equal_temperature_boundary_limits() {
    let fig = config("equal_temp_log_g.toml");
    let g = (2.0 / 3.0f64.sqrt()).to_string();
    let (s, cell) = b_column(&ok(&[
        "sweep",
        "--config",
        &fig,
        "--set",
        &format!("g={g}"),
    ]));
    let b = last_entangled_b(&s.iter().collect::<Vec<_>>());
    assert!((b - 2.0).abs() <= cell, "boundary {b} at g = 2/sqrt(3)");

    let (s, cell) = b_column(&ok(&["sweep", "--config", &fig, "--set", "g=1000"]));
    let b = last_entangled_b(&s.iter().collect::<Vec<_>>());
    let limit = (1.0 + 3.0f64.sqrt()) / 2.0;
    assert!((b - limit).abs() <= cell, "boundary {b} at large g");
}

#[test]
fn equal_temperature_boundary_over_full_grid() {
    let (samples, cell) = b_column(&ok(&[
        "sweep",
        "--config",
        &config("equal_temp_log_g.toml"),
    ]));
    assert_eq!(samples.len(), 200 * 160);
    let limit = (1.0 + 3.0f64.sqrt()) / 2.0;
    let mut last = 0.0;
    for column in samples.chunks(160) {
        let g = coord(&column[0], "g");
        let b = last_entangled_b(&column.iter().collect::<Vec<_>>());
        let exact = equal_temp_boundary_b(g);
        // A grid point within the dead band of the closed form may land
        // on either side.
        assert!(
            (b - exact).abs() <= cell + 1e-3,
            "g = {g}: numeric {b}, closed form {exact}"
        );
        last = b;
    }
    // At the top of the g range the boundary is still approaching its
    // large-g limit from above.
    assert!(last > limit && last < 1.5, "boundary {last} at g = 4");
}

#[test]
fn single_noise_bound_crossover() {
    let samples = parse_csv(&ok(&["sweep", "--config", &config("bound_crossover.toml")])).unwrap();
    let g2_steps = 200;
    let ratio = coord(&samples[1], "g2") / coord(&samples[0], "g2");
    // Per column: which of the two bounds the numerical edge follows, where
    // they are far enough apart to tell.
    let mut labels = Vec::new();
    for column in samples.chunks(g2_steps) {
        let kappa = coord(&column[0], "kappa");
        let flags: Vec<bool> = column.iter().map(|r| r.entangled == Some(true)).collect();
        let n = flags.iter().take_while(|e| **e).count();
        assert!(flags[n..].iter().all(|e| !e), "kappa = {kappa}");
        let (b1, b2) = entangling_g2_bounds(kappa);
        let bound = b1.min(b2);
        let lo = coord(&column[0], "g2");
        let hi = coord(&column[g2_steps - 1], "g2");
        if bound <= lo * ratio || bound >= hi / ratio {
            continue;
        }
        let edge = coord(&column[n - 1], "g2");
        assert!(
            edge <= bound && bound <= edge * ratio * ratio,
            "kappa = {kappa}: edge {edge}, bound {bound}"
        );
        if (b1 / b2).ln().abs() > 2.0 * ratio.ln() {
            labels.push((kappa, b1 < b2));
        }
    }
    let switch = labels
        .windows(2)
        .find(|w| w[0].1 != w[1].1)
        .expect("binding bound switches");
    let (k0, k1) = (switch[0].0, switch[1].0);
    let kc = crossover_kappa();
    assert!(
        k0 < kc && kc < k1 && k1 - k0 < 0.002,
        "switch in [{k0}, {k1}], crossover {kc}"
    );
    assert_eq!(labels.windows(2).filter(|w| w[0].1 != w[1].1).count(), 1);
}

#[test]
fn quick_sweep_caps_axes() {
    let out = ok(&[
        "sweep",
        "--config",
        &config("equal_temp_regions.toml"),
        "--quick",
    ]);
    assert_eq!(out.lines().count(), 1 + 11 * 11);
}

#[test]
fn set_overrides_axis() {
    let fig = config("bound_crossover.toml");
    let out = ok(&["sweep", "--config", &fig, "--set", "kappa=0.5"]);
    let samples = parse_csv(&out).unwrap();
    assert_eq!(samples.len(), 200);
    assert_eq!(samples[0].coordinates.len(), 1);
    let out = ok(&[
        "sweep",
        "--config",
        &fig,
        "--axis",
        "beta_tilde:1:1.2:3",
        "--quick",
    ]);
    assert_eq!(out.lines().count(), 1 + 11 * 11 * 3);
    let both = run(&[SMALL_SWEEP, &["--set", "kappa=0.5"]].concat());
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn heuristic_temperature_entangles_at_small_coupling() {
    let out = ok(&[
        "sweep",
        "--config",
        &config("heuristic_temperature.toml"),
        "--quick",
    ]);
    let samples = parse_csv(&out).unwrap();
    let first_per_kappa: Vec<&RegionSample> = samples.chunks(11).map(|c| &c[0]).collect();
    for r in first_per_kappa {
        let kappa = coord(r, "kappa");
        if kappa.abs() > 1e-9 && kappa.abs() < 0.8 {
            assert_eq!(r.entangled, Some(true), "kappa = {kappa}");
        }
    }
}
