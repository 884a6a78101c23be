use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeno")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn scales_reference_packet() {
    let v = stdout_json(&zeno(&["scales"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["tau"].as_f64().unwrap(), 0.05);
    assert!((v["tau_zeno"].as_f64().unwrap() - 0.1414).abs() < 1e-4);
    assert_eq!(v["gamma_prime"].as_f64().unwrap(), 0.25);
    assert_eq!(v["regime"], "Zeno");

    let v = stdout_json(&zeno(&["scales", "--delta-t", "1"]));
    assert_eq!(v["regime"], "PureAntiZeno");
}

#[test]
fn invalid_width_exits_with_validation_code() {
    let out = zeno(&["scales", "--sigma0", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma0"));
}

#[test]
fn small_run_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = zeno(&[
        "run",
        "--delta-t",
        "0.02",
        "--total-time",
        "0.1",
        "--sample-dt",
        "0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let csv = fs::read_to_string(out.join("trace.csv")).unwrap();
    let golden = include_str!("golden/run_small.csv");
    assert_eq!(csv, golden);

    // The frozen free column is (1 + (t/2 tau)^2)^(-1/4), tau = 0.05.
    for row in csv.lines().skip(1) {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        let x = f[0] / 0.1;
        assert!((f[1] - (1.0 + x * x).powf(-0.25)).abs() < 1e-15);
        assert!((f[3] - (-0.5 * f[0]).exp()).abs() < 1e-15);
    }
    // At t = n * 0.02 the perturbed column is |C(0.02)|^n = 1.04^(-n/4).
    let rows: Vec<&str> = csv.lines().collect();
    for (row, n) in [(3, 1), (5, 2), (9, 4)] {
        let v: f64 = rows[row].split(',').nth(2).unwrap().parse().unwrap();
        assert!((v - 1.04f64.powf(-0.25 * n as f64)).abs() < 1e-15, "n={n}");
    }
}

#[test]
fn run_outputs_and_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zeno");
    let summary = stdout_json(&zeno(&["run", "--out", out.to_str().unwrap()]));
    let fit = summary["gamma_prime_fit"].as_f64().unwrap();
    assert!((fit - 0.249).abs() <= 0.013, "{fit}");
    assert_eq!(summary["regime"], "Zeno");
    assert!(summary["crossing_time"].is_null());

    let bytes = fs::read(out.join("trace.csv")).unwrap();
    assert!(!bytes.contains(&b'\r'));
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("t,c_unperturbed,c_perturbed,envelope,fit,delta\n"));
    assert_eq!(text.lines().count(), 50_002);
    assert_eq!(read_json(&out.join("summary.json")), summary);
}

#[test]
fn anti_zeno_run_reports_early_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let s = stdout_json(&zeno(&["run", "--delta-t", "1", "--out", dir.path().to_str().unwrap()]));
    let t = s["crossing_time"].as_f64().unwrap();
    assert!(t <= 2.0);
    assert!(s["gamma_prime_fit"].as_f64().unwrap() / s["gamma_prime_est"].as_f64().unwrap() < 0.1);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(
        &cfg,
        r#"{"schedule": {"delta_t": 0.1, "total_time": 2, "sample_dt": 0.001}, "outputs": ["trace", "summary"]}"#,
    )
    .unwrap();
    let out = dir.path().join("o");
    let s = stdout_json(&zeno(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--total-time",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(s["gamma_prime_est"].as_f64().unwrap(), 2.5);
    let rows = csv_rows(&out.join("trace.csv"));
    assert_eq!(rows[0], ["t", "c_unperturbed", "c_perturbed"]);
    assert_eq!(rows.len(), 1002);

    fs::write(&cfg, r#"{"schedule": {"delta": 0.1}}"#).unwrap();
    assert_eq!(zeno(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn failed_fit_still_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let s = stdout_json(&zeno(&[
        "run",
        "--total-time",
        "1",
        "--fit-window",
        "0.5,0.5001",
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    assert!(s["gamma_prime_fit"].is_null());
    assert!(s["fit_error"].as_str().unwrap().contains("samples"));
    assert_eq!(csv_rows(&dir.path().join("trace.csv")).len(), 10_002);
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = zeno(&["run", "--total-time", "0.1", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert!(zeno(&["run", "--delta-t", "0.1", "--out", d.to_str().unwrap()]).status.success());
    }
    for f in ["trace.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn interval_sweep_rows() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, name: &str| {
        let out = dir.path().join(name);
        let o = zeno(&[
            "sweep",
            "--axis",
            "delta_t",
            "--values",
            "1,0.1,0.01",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out.join("sweep.csv")).unwrap()
    };
    let serial = run("1", "w1");
    assert_eq!(serial, run("4", "w4"));

    let rows = csv_rows(&dir.path().join("w1").join("sweep.csv"));
    let col = |name: &str| rows[0].iter().position(|h| h == name).unwrap();
    let est: Vec<f64> = rows[1..].iter().map(|r| r[col("gamma_prime_est")].parse().unwrap()).collect();
    assert_eq!(est, [25.0, 2.5, 0.25]);
    let d: Vec<f64> = rows[1..].iter().map(|r| r[col("max_abs_delta")].parse().unwrap()).collect();
    assert!(d[0] > d[1] && d[1] > d[2]);
}

#[test]
fn momentum_sweep_flips_overlap_condition() {
    let dir = tempfile::tempdir().unwrap();
    let o = zeno(&[
        "sweep",
        "--axis",
        "p0",
        "--values",
        "0,0.5,0.7071067811865476,0.75,1",
        "--total-time",
        "0.5",
        "--sample-dt",
        "0.001",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    let col = rows[0].iter().position(|h| h == "overlap_condition").unwrap();
    let flags: Vec<&str> = rows[1..].iter().map(|r| r[col].as_str()).collect();
    assert_eq!(flags, ["true", "true", "true", "false", "false"]);
}

#[test]
fn sweep_records_failed_points_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = zeno(&[
        "sweep",
        "--axis",
        "delta_t",
        "--values",
        "0.05,0.5,5",
        "--total-time",
        "1",
        "--sample-dt",
        "0.01",
        "--traces",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let last = text.lines().nth(3).unwrap();
    assert!(last.starts_with("2,delta_t,5.0,"));
    assert!(last.contains("total_time"), "{last}");
    assert!(dir.path().join("points/000/trace.csv").exists());
    assert!(dir.path().join("points/001/summary.json").exists());
    assert!(!dir.path().join("points/002").exists());
}

#[test]
fn sweep_rejects_non_monotone_values() {
    let o = zeno(&["sweep", "--axis", "delta_t", "--values", "0.1,0.3,0.2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_check_paths() {
    let v = stdout_json(&zeno(&["oracle-check"]));
    assert_eq!(v["pass"], true);
    assert!(v["correlation_max_abs_error"].as_f64().unwrap() <= 1e-6);
    assert!(v["mean_h_rel_error"].as_f64().unwrap() <= 1e-6);

    let v = stdout_json(&zeno(&["oracle-check", "--p0", "1"]));
    assert!(v["phase_max_abs_error"].as_f64().unwrap() <= 1e-5);

    let o = zeno(&["oracle-check", "--grid-width", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("suggested domain"));

    let o = zeno(&["oracle-check", "--tolerance", "1e-30"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}
