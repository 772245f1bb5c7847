use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qmclab_cli::{run_experiment, Experiment, ExperimentConfig};

fn qmclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// Data rows of a CSV written by the harness: the comment and header are
/// checked and stripped.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# qmclab "));
    let header = lines.next().unwrap();
    assert!(header.starts_with("experiment,trial,seed,copies"));
    lines.map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn uncertainty_curve_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "u.json", r#"{"params": {"m_max": 20}}"#);
    let out = dir.path().join("out");
    let res = qmclab(&["uncertainty-curve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = fs::read_to_string(out.join("uncertainty-curve.csv")).unwrap();
    let header: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let product = header.iter().position(|h| *h == "product").unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[0][product].parse::<f64>().unwrap(), PI / 2.0);
    for (i, row) in rows.iter().enumerate() {
        let m = (i + 1) as f64;
        let expected = m * PI / 2f64.powi(i as i32 + 1);
        assert!((row[product].parse::<f64>().unwrap() - expected).abs() <= 1e-15);
    }
    assert!(out.join("uncertainty-curve.summary.txt").exists());
}

#[test]
fn verifier_false_accepts_halve() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::parse(r#"{"seed": 3, "trials": 100000}"#, Experiment::Verifier).unwrap();
    config.trials = 100_000;
    let summary = run_experiment(&config, dir.path()).unwrap();
    assert_eq!(summary.rows, 8);
    for m in 1..=8 {
        let rate = summary.metric(&format!("false_accept_rate@{m}")).unwrap();
        let p = 0.5f64.powi(m);
        let sigma = (p * (1.0 - p) / 1e5).sqrt();
        assert!((rate - p).abs() <= 4.0 * sigma, "m={m} rate={rate}");
    }
    assert_eq!(summary.metric("correct_rejections"), Some(0.0));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "m.json",
        r#"{"seed": 42, "trials": 40, "params": {"n_values": [16, 256]}}"#,
    );
    let mut outputs = Vec::new();
    for (run, jobs) in [("a", "1"), ("b", "3"), ("c", "1")] {
        let out = dir.path().join(run);
        let res = qmclab(&[
            "mle-scaling",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert!(res.status.success());
        outputs.push((
            fs::read(out.join("mle-scaling.csv")).unwrap(),
            fs::read(out.join("mle-scaling.summary.txt")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn overrides_change_output_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"seed": 1, "trials": 5}"#);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(
        qmclab(&["clone-fidelity", "--config", &cfg, "--out", a.to_str().unwrap()])
            .status
            .success()
    );
    let res = qmclab(&[
        "clone-fidelity",
        "--config",
        &cfg,
        "--out",
        b.to_str().unwrap(),
        "--seed",
        "2",
        "--trials",
        "7",
    ]);
    assert!(res.status.success());
    let csv_a = fs::read_to_string(a.join("clone-fidelity.csv")).unwrap();
    let csv_b = fs::read_to_string(b.join("clone-fidelity.csv")).unwrap();
    assert_eq!(data_rows(&csv_a).len(), 5);
    assert_eq!(data_rows(&csv_b).len(), 7);
    assert_ne!(csv_a.lines().next(), csv_b.lines().next());
}

#[test]
fn unknown_param_is_a_config_error_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        "{\n  \"seed\": 1,\n  \"params\": {\n    \"m_mx\": 3\n  }\n}\n",
    );
    let res = qmclab(&["bisection", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("line 4"), "{err}");
    assert!(!dir.path().join("bisection.csv").exists());
}

#[test]
fn out_of_range_param_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"params": {"cutoff": -1.0}}"#);
    let res = qmclab(&["wigner", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("params.cutoff"));
}

#[test]
fn missing_config_and_bad_arguments_exit_one() {
    let res = qmclab(&["verifier", "--config", "/nonexistent/config.json"]);
    assert_eq!(res.status.code(), Some(1));
    let res = qmclab(&["no-such-experiment", "--config", "x.json"]);
    assert_eq!(res.status.code(), Some(1));
    let res = qmclab(&["verifier", "--config", "x.json", "--jobs", "0"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "u.json", "{}");
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let res = qmclab(&[
        "uncertainty-curve",
        "--config",
        &cfg,
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn every_experiment_runs_small() {
    let dir = tempfile::tempdir().unwrap();
    let small = [
        (
            Experiment::TomographyScaling,
            r#"{"trials": 4, "params": {"m_values": [10, 100]}}"#,
        ),
        (Experiment::Bisection, r#"{"trials": 10, "params": {"m_max": 6}}"#),
        (
            Experiment::MleScaling,
            r#"{"trials": 4, "params": {"n_values": [8, 32]}}"#,
        ),
        (Experiment::UncertaintyCurve, r#"{"params": {"m_max": 5}}"#),
        (
            Experiment::Verifier,
            r#"{"trials": 50, "params": {"m_max": 3, "mode": "sequential"}}"#,
        ),
        (Experiment::CloneFidelity, r#"{"trials": 3}"#),
        (
            Experiment::CloneTomography,
            r#"{"trials": 3, "params": {"m_values": [50]}}"#,
        ),
        (
            Experiment::Wigner,
            r#"{"params": {"n_per_angle": 200, "theta_bins": 12, "x_bins": 40, "grid_step": 1.0}}"#,
        ),
        (Experiment::NumberPhase, r#"{"params": {"alphas": [1.0], "dim": 32}}"#),
        (
            Experiment::ComplexityProfile,
            r#"{"trials": 5, "params": {"strategies": ["bisection", "exact_oracle"], "targets": [0.1]}}"#,
        ),
    ];
    for (experiment, body) in small {
        let config = ExperimentConfig::parse(body, experiment).unwrap();
        let summary = run_experiment(&config, dir.path()).unwrap();
        assert!(summary.rows > 0, "{experiment}");
        let csv = fs::read_to_string(dir.path().join(format!("{experiment}.csv"))).unwrap();
        let rows = data_rows(&csv);
        assert_eq!(rows.len(), summary.rows);
        assert!(rows.iter().all(|r| r[0] == experiment.name()));
        let text = fs::read_to_string(dir.path().join(format!("{experiment}.summary.txt"))).unwrap();
        assert!(text.contains(&summary.config_hash));
    }
}

#[test]
fn mismatched_params_rejected_by_runner() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::defaults(Experiment::Verifier);
    config.params = qmclab_cli::Params::defaults(Experiment::Wigner);
    let err = run_experiment(&config, dir.path()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}
