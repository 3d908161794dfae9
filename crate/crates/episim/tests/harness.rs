use std::fs;
use std::path::Path;
use std::process::Command;

use episim::config::ExperimentConfig;
use episim::sweep::{run_experiment_in, ExperimentError};

fn cycle_config(replications: u64) -> String {
    format!(
        r#"
model = "sis"
beta = 0.2
replications = {replications}
n_sweep = [50, 100, 150, 200]
base_seed = 11

[graph]
family = "cycle"
n = 50

[strategy]
kind = "targeted_max_degree"
mu = 1.0

[outputs]
raw_csv = "runs_{{n}}.csv"
summary_json = "summary.json"
"#
    )
}

#[test]
fn zero_replications_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_toml(&cycle_config(0)).unwrap();
    let err = run_experiment_in(&cfg, dir.path()).unwrap_err();
    assert!(matches!(err, ExperimentError::Config(_)), "{err}");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn rerun_is_byte_identical() {
    let cfg = ExperimentConfig::from_toml(&cycle_config(200)).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment_in(&cfg, a.path()).unwrap();
    run_experiment_in(&cfg, b.path()).unwrap();
    for name in ["runs_50.csv", "runs_200.csv", "summary.json"] {
        let x = fs::read(a.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn cycle_sweep_reports_four_points_and_an_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_toml(&cycle_config(300)).unwrap();
    let report = run_experiment_in(&cfg, dir.path()).unwrap();
    assert_eq!(report.points.len(), 4);
    let reg = report.regression.as_ref().expect("regression runs on an uncensored sweep");
    assert!(reg.power_exponent.is_finite());
    assert!(reg.power_exponent_ci95[0] <= reg.power_exponent && reg.power_exponent <= reg.power_exponent_ci95[1]);
    for p in &report.points {
        assert_eq!(p.censored_fraction, 0.0);
        assert_eq!(p.replications, 300);
        let [lo, hi] = p.extinction_time.ci95.unwrap();
        assert!(lo <= p.extinction_time.mean && p.extinction_time.mean <= hi);
    }
    let csv = fs::read_to_string(dir.path().join("runs_100.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("seed,model,extinction_time,censored,eventual_infected,event_count"));
    assert_eq!(lines.count(), 300);
    let json: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(json["points"].as_array().unwrap().len(), 4);
    assert!(json["points"][0]["censored_fraction"].is_number());
    // the embedded config reproduces the run
    let again: ExperimentConfig = serde_json::from_value(json["config"].clone()).unwrap();
    assert_eq!(again, cfg);
}

#[test]
fn io_failure_keeps_completed_points() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("runs_150.csv")).unwrap();
    let cfg = ExperimentConfig::from_toml(&cycle_config(20)).unwrap();
    match run_experiment_in(&cfg, dir.path()).unwrap_err() {
        ExperimentError::Io { completed, path, .. } => {
            assert_eq!(completed.len(), 2);
            assert!(path.ends_with("runs_150.csv"));
        }
        e => panic!("unexpected {e}"),
    }
    assert!(dir.path().join("runs_50.csv").is_file());
    assert!(dir.path().join("runs_100.csv").is_file());
    assert!(!dir.path().join("summary.json").exists());
}

#[test]
fn sir_sweep_regresses_eventual_infected() {
    let text = cycle_config(200).replace("\"sis\"", "\"sir\"").replace("[outputs]", "[unused]");
    let text = text.split("[unused]").next().unwrap().to_owned();
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    let report = run_experiment_in(&cfg, Path::new("")).unwrap();
    assert_eq!(report.regression.as_ref().unwrap().metric, "eventual_infected");
    assert!(report.points.iter().all(|p| p.eventual_infected.as_ref().unwrap().mean >= 1.0));
}

fn episim(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_episim")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn cli_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = episim(&["metrics", "star:leaves=49", "--eta", "1,5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["d_max"], 49);
    assert!((v["lambda1"].as_f64().unwrap() - 7.0).abs() < 1e-6);
    assert_eq!(v["eta"][1]["value"], 1.0);

    fs::write(dir.path().join("tri.txt"), "n 3\n0 1\n1 2\n2 0\n").unwrap();
    let out = episim(&["metrics", "tri.txt"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["edge_count"], 3);

    let out = episim(&["bounds", "--beta", "0.1", "--d-max", "2", "--mu", "1", "--n", "50"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regime"], "SUBCRITICAL");

    let out = episim(&["classify", "cycle:n=40", "--beta", "0.2", "--strategy", "targeted-max-degree", "--mu", "1"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["regime"], "SUBCRITICAL");

    let out = episim(&["classify", "star:leaves=100", "--beta", "0.05", "--strategy", "targeted-max-degree", "--mu", "1"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["regime"], "CRITICAL-CANDIDATE");

    fs::write(dir.path().join("exp.toml"), cycle_config(30)).unwrap();
    let out = episim(&["simulate", "exp.toml", "--size", "100", "--output", "cli_runs.csv", "--trajectory", "traj.txt"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(dir.path().join("cli_runs.csv")).unwrap().lines().count(), 31);
    let traj = fs::read_to_string(dir.path().join("traj.txt")).unwrap();
    assert!(traj.lines().all(|l| {
        let f: Vec<_> = l.split(' ').collect();
        f.len() == 3 && ["INTRINSIC", "EXTERNAL", "RECOVER"].contains(&f[1])
    }));
    assert!(traj.lines().last().unwrap().contains("RECOVER"));

    let out = episim(&["sweep", "exp.toml", "--summary", "s.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(dir.path().join("s.json")).unwrap(), out.stdout);

    fs::write(dir.path().join("bad.toml"), cycle_config(0)).unwrap();
    let out = episim(&["sweep", "bad.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("replications"));
}
