//! End-to-end tests of the `vhetnet` binary and its library entry point.

use std::path::{Path, PathBuf};
use std::process::Command;

use vhetnet::cli::{run_cli, EXIT_INVALID, EXIT_IO, EXIT_MALFORMED, EXIT_OK};
use vhetnet::prelude::*;

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["vhetnet"];
    argv.extend_from_slice(args);
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn quick_run(config: &str, out: &Path, extra: &[&str]) -> (i32, String, String) {
    let cfg = config_path(config);
    let mut args = vec![
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--set",
        "sweep.replications=2",
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn bundled_configs_parse_and_validate() {
    for name in ["density", "uav_count", "head_count"] {
        let cfg = vhetnet::cli::load_run_config(Some(&config_path(name)), &[]).unwrap();
        cfg.validate().unwrap();
    }
    let density = vhetnet::cli::load_run_config(Some(&config_path("density")), &[]).unwrap();
    assert_eq!(density.sweep, SweepSpec::density());
    assert_eq!(density.environment, EnvironmentConfig::default());
}

#[test]
fn run_writes_expected_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = quick_run("head_count", dir.path(), &[]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    assert!(stdout.contains("rows"));
    let rows = std::fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next().unwrap(), "method,delta,n,k,replication,seed,total_score");
    assert_eq!(lines.count(), 5 * 8 * 2);
    let agg = std::fs::read_to_string(dir.path().join("aggregate.csv")).unwrap();
    assert!(agg.starts_with("method,swept_param,swept_value,mean_total,sd_total\n"));
    assert_eq!(agg.lines().count(), 1 + 5 * 8);
    assert!(dir.path().join("energy_vs_k.svg").exists());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = quick_run("density", dir.path(), &["--seed", "100", "--no-plots"]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    assert!(!dir.path().join("energy_vs_delta.svg").exists());
    let rows = std::fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    let first = rows.lines().nth(1).unwrap();
    assert!(first.starts_with("DLC_AHN,0.0001,8,1,0,100,"), "{first}");
}

#[test]
fn invalid_combination_exits_3_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let (code, _, stderr) = quick_run("uav_count", &out, &["--set", "sweep.k=4"]);
    assert_eq!(code, EXIT_INVALID, "{stderr}");
    assert!(stderr.contains("exceeds"));
    assert!(!out.exists());
}

#[test]
fn malformed_config_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"sweep\": {\n    \"replications\": \"many\"\n  }\n}\n").unwrap();
    let (code, _, stderr) = run(&["run", "--config", bad.to_str().unwrap(), "--output", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code, EXIT_MALFORMED);
    assert!(stderr.contains("bad.json:3:"), "{stderr}");
    assert!(!dir.path().join("o").exists());

    std::fs::write(&bad, "{\n  \"sweep\": {\n").unwrap();
    let (code, _, stderr) = run(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_MALFORMED);
    assert!(stderr.contains("bad.json:3:"), "{stderr}");

    let (code, _, _) = run(&["run", "--config", "/nonexistent/config.json"]);
    assert_eq!(code, EXIT_MALFORMED);
    let (code, _, _) = run(&["run", "--set", "noequals"]);
    assert_eq!(code, EXIT_MALFORMED);
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let (code, _, _) = quick_run("density", &blocker.join("sub"), &["--set", "sweep.values=[0.0001]"]);
    assert_eq!(code, EXIT_IO);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(quick_run("uav_count", a.path(), &[]).0, EXIT_OK);
    assert_eq!(quick_run("uav_count", b.path(), &[]).0, EXIT_OK);
    for file in ["rows.csv", "aggregate.csv", "energy_vs_n.svg"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file} differs");
    }
}

#[test]
fn svg_regenerates_from_aggregate_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(quick_run("density", dir.path(), &[]).0, EXIT_OK);
    let csv = std::fs::File::open(dir.path().join("aggregate.csv")).unwrap();
    let rows = vhetnet::harness::read_aggregate_csv(csv).unwrap();
    let svg = render_svg(&rows, "Energy score vs delta");
    assert_eq!(svg, std::fs::read_to_string(dir.path().join("energy_vs_delta.svg")).unwrap());
}

#[test]
fn inspect_reports_generated_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    let cfg = EnvironmentConfig::default();
    Scenario::generate(&cfg, 1e-3).unwrap().save(&path).unwrap();
    let (code, stdout, _) = run(&["inspect", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("UEs: 9000, density: 1e-3"), "{stdout}");
    assert!(stdout.contains(&format!("hotspots: {}", cfg.hotspot_count)));
    assert!(stdout.contains(&format!("spread {} m", cfg.hotspot_spread)));
    assert!(stdout.contains("landing spots: 4"));
    assert!(stdout.contains("(750, 750)"));
}

#[test]
fn inspect_flags_missing_landing_spots() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bare.json");
    let cfg = EnvironmentConfig {
        landing_spots: vec![],
        ..EnvironmentConfig::default()
    };
    Scenario::generate(&cfg, 1e-5).unwrap().save(&path).unwrap();
    let (code, stdout, _) = run(&["inspect", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("no landing spots (DLC-AHN unavailable)"));
}

#[test]
fn inspect_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{\"ues\": 3}").unwrap();
    assert_eq!(run(&["inspect", path.to_str().unwrap()]).0, EXIT_MALFORMED);
    assert_eq!(run(&["inspect", "/nonexistent.json"]).0, EXIT_MALFORMED);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vhetnet");
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(bin)
        .args(["run", "--config"])
        .arg(config_path("head_count"))
        .args(["--set", "sweep.values=[1,2,9]", "--output"])
        .arg(dir.path().join("o"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_INVALID));
    let status = Command::new(bin).arg("bogus").status().unwrap();
    assert_eq!(status.code(), Some(EXIT_MALFORMED));
    let output = Command::new(bin).arg("--help").output().unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("inspect"));
}
