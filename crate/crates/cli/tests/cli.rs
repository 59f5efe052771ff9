use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn qpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpm")).args(args).output().expect("spawn qpm")
}

fn run_ok(args: &[&str]) {
    let o = qpm(args);
    assert!(o.status.success(), "qpm {args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn default_sfg_scan_is_251_square_and_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = data_dir().join("configs/simulate_sfg.toml");
    let a = tmp.path().join("a");
    let files = ["sfg_counts.csv", "sfg_expected.csv", "sfg_scan.json", "sfg_scan.svg", "sfg_counts.csv.meta.json"];
    let args = ["simulate-sfg", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()];
    run_ok(&args);
    let first: Vec<Vec<u8>> = files.iter().map(|f| fs::read(a.join(f)).unwrap()).collect();
    run_ok(&args);
    let counts = fs::read_to_string(a.join("sfg_counts.csv")).unwrap();
    let lines: Vec<&str> = counts.lines().collect();
    assert_eq!(lines.len(), 252);
    assert!(lines.iter().all(|l| l.split(',').count() == 252));
    assert!(!counts.contains('\r'));
    for (f, bytes) in files.iter().zip(&first) {
        assert_eq!(&fs::read(a.join(f)).unwrap(), bytes, "{f} differs");
    }
    let meta = read_json(&a.join("sfg_counts.csv.meta.json"));
    assert_eq!(meta["config"]["seed"], 1);
    assert_eq!(meta["config"]["crystal"]["poling_period_um"], 46.125);
    let summary = read_json(&a.join("sfg_scan.json"));
    assert_eq!(summary["rows"], 251);
    assert!(summary["snr_db"].as_f64().unwrap() > 39.9);
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "c.json",
        r#"{"seed": 1, "scan": {"axis1": {"start_nm": 1579, "stop_nm": 1581, "step_nm": 0.5},
            "axis2": {"start_nm": 1579, "stop_nm": 1581, "step_nm": 0.5}}}"#,
    );
    let out = tmp.path().join("o");
    run_ok(&["simulate-sfg", "--config", &cfg, "--seed", "9", "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(read_json(&out.join("sfg_scan.json"))["seed"], 9);
    assert!(!out.join("sfg_counts.csv").exists());
}

#[test]
fn sampling_without_seed_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = qpm(&["simulate-sfg", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
    assert!(!out.exists());
}

#[test]
fn missing_sellmeier_file_leaves_no_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "c.json", r#"{"sellmeier": "nowhere.json", "seed": 1}"#);
    let out = tmp.path().join("o");
    let o = qpm(&["simulate-sfg", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere.json"));
    assert!(!out.exists());
}

#[test]
fn three_process_shg_has_total_and_components() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = data_dir().join("configs/simulate_shg.toml");
    let out = tmp.path().join("o");
    run_ok(&["simulate-shg", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = fs::read_to_string(out.join("shg_scan.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header, "wavelength_nm,expected_total,counts,type-ii,type-i,type-0");
    assert_eq!(text.lines().count(), 1 + 2751);
}

#[test]
fn single_process_total_is_component_plus_dark() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "c.toml",
        r#"
[detector]
dark_count_rate = 0.0
[scan]
axis1 = { start_nm = 1575.0, stop_nm = 1585.0, step_nm = 0.5 }
sample = false
[[shg_processes]]
label = "only"
relative_amplitude = 1.0
crystal = { poling_period_um = 46.125, length_mm = 29.0, polarization = "type-ii" }
"#,
    );
    let out = tmp.path().join("o");
    run_ok(&["simulate-shg", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "csv"]);
    let text = fs::read_to_string(out.join("shg_scan.csv")).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(v[1], v[2]);
    }
}

#[test]
fn out_of_range_sweep_is_a_domain_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "c.json",
        r#"{"scan": {"axis1": {"start_nm": 3400, "stop_nm": 3700, "step_nm": 10}, "sample": false}}"#,
    );
    let out = tmp.path().join("o");
    let o = qpm(&["simulate-shg", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());
}

#[test]
fn fit_on_shipped_fixture_recovers_period() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = data_dir().join("configs/fit.toml");
    let out = tmp.path().join("o");
    run_ok(&["fit", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let r = read_json(&out.join("fit_result.json"));
    let period = r["crystal"]["poling_period_um"].as_f64().unwrap();
    let length = r["crystal"]["length_mm"].as_f64().unwrap();
    assert!((period / 46.125 - 1.0).abs() < 1e-3, "period {period}");
    assert!((length / 29.0 - 1.0).abs() < 1e-2, "length {length}");
    assert!(fs::read_to_string(out.join("fit_report.txt")).unwrap().contains("converged"));
    assert!(out.join("fit_curve_0.csv").exists());
}

#[test]
fn optimize_pump_reports_optimum() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "c.toml",
        r#"
crystal = { poling_period_um = 46.1, length_mm = 30.0, polarization = "type-ii" }
[grid]
signal_points = 96
idler_points = 96
[optimize]
shape = "gaussian"
search = { min_nm = 0.05, max_nm = 5.0, coarse_points = 12, tolerance_nm = 0.01 }
"#,
    );
    let out = tmp.path().join("o");
    run_ok(&["optimize-pump", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let r = read_json(&out.join("optimize_pump.json"));
    let best = r["best"]["indistinguishability"].as_f64().unwrap();
    let bw = r["best"]["bandwidth_nm"].as_f64().unwrap();
    assert!(best > 0.5 && best <= 1.0, "I* = {best}");
    assert!(bw > 0.05 && bw < 5.0);
    assert_eq!(r["shape"], "gaussian");
    assert!(fs::read_to_string(out.join("optimize_pump.csv")).unwrap().starts_with("pump_bandwidth_nm,indistinguishability\n"));
}

#[test]
fn error_model_ratio_is_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = data_dir().join("configs/error_model.json");
    let out = tmp.path().join("o");
    run_ok(&["error-model", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let r = read_json(&out.join("error_model.json"));
    assert_eq!(r["coincidence_error_ratio"], 1.0);
    assert!((r["sfg_error_probability"].as_f64().unwrap() - 1e-4).abs() < 1e-18);
}

#[test]
fn invalid_error_model_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "c.json", r#"{"error_model": {"pair_probability": 0, "separation_error": 0.01}}"#);
    let o = qpm(&["error-model", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn jsa_and_schmidt_write_consistent_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "c.toml",
        r#"
[grid]
signal_points = 64
idler_points = 80
[phase_matching]
kind = "uniform"
include_phase = true
"#,
    );
    let out = tmp.path().join("o");
    run_ok(&["build-jsa", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let jsa = fs::read_to_string(out.join("jsa.csv")).unwrap();
    assert_eq!(jsa.lines().count(), 65);
    assert_eq!(read_json(&out.join("jsa.json"))["header"]["idler_points"], 80);
    assert!(out.join("jsi.svg").exists());

    run_ok(&["schmidt", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let s = read_json(&out.join("schmidt.json"));
    let p = s["purity"].as_f64().unwrap();
    assert!((s["g2"].as_f64().unwrap() - 1.0 - p).abs() < 1e-12);
    assert!(s["with_phase_factor"]["purity"].as_f64().is_some());
}

#[test]
fn tabulated_import_round_trips_a_jsi() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let base = config(tmp.path(), "a.toml", "[grid]\nsignal_points = 48\nidler_points = 48\n");
    run_ok(&["build-jsa", "--config", &base, "--out", out.to_str().unwrap(), "--format", "csv"]);
    let cfg = config(
        tmp.path(),
        "b.toml",
        "[grid]\nsignal_points = 48\nidler_points = 48\n[phase_matching]\nkind = \"tabulated\"\npath = \"o/jsi.csv\"\n",
    );
    let out2 = tmp.path().join("o2");
    run_ok(&["schmidt", "--config", &cfg, "--out", out2.to_str().unwrap(), "--format", "json"]);
    let p = read_json(&out2.join("schmidt.json"))["purity"].as_f64().unwrap();
    assert!(p > 0.0 && p <= 1.0);
}

#[test]
fn cross_section_fit_of_a_simulated_scan() {
    let tmp = tempfile::tempdir().unwrap();
    let grid = r#"{"start_nm": 1577, "stop_nm": 1583, "step_nm": 0.05}"#;
    let sim = config(
        tmp.path(),
        "sim.json",
        &format!(r#"{{"seed": 4, "scan": {{"axis1": {grid}, "axis2": {grid}, "sample": false}}}}"#),
    );
    run_ok(&["simulate-sfg", "--config", &sim, "--out", tmp.path().join("scan").to_str().unwrap(), "--format", "csv"]);
    let fit = config(
        tmp.path(),
        "fit.toml",
        r#"
crystal = { poling_period_um = 46.1, length_mm = 30.0, polarization = "type-ii" }
[fit]
observations = [{ kind = "cross_section", path = "scan/sfg_expected.csv", pump_nm = 790.0, samples = 121 }]
"#,
    );
    let out = tmp.path().join("o");
    run_ok(&["fit", "--config", &fit, "--out", out.to_str().unwrap(), "--format", "json", "--format", "csv"]);
    let r = read_json(&out.join("fit_result.json"));
    let period = r["crystal"]["poling_period_um"].as_f64().unwrap();
    assert!((period / 46.125 - 1.0).abs() < 1e-4, "period {period}");
    let curve = fs::read_to_string(out.join("fit_curve_0.csv")).unwrap();
    assert_eq!(curve.lines().count(), 122);
}
