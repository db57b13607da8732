//! End-to-end tests of the `submax` binary: exit codes, output schemas, and
//! seed determinism.

use std::path::Path;
use std::process::{Command, Output};

fn submax() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_submax"));
    // isolate from the caller's environment overrides
    cmd.env_remove("SUBMAX_BUDGET_CONSTANT");
    cmd.env_remove("SUBMAX_SAMPLES_PER_ESTIMATE");
    cmd
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

fn modular_fixture(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let matroid = dir.join("matroid.json");
    let objective = dir.join("objective.json");
    write(&matroid, r#"{"type":"uniform","n":4,"rank":2}"#);
    // diagonal facility location = modular with weights (3, 1, 4, 2)
    write(
        &objective,
        r#"{"type":"facility_location","weights":[[3.0,0,0,0],[0,1.0,0,0],[0,0,4.0,0],[0,0,0,2.0]]}"#,
    );
    (matroid, objective)
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn solve_is_deterministic_and_finds_the_top_basis() {
    let dir = tempfile::tempdir().unwrap();
    let (matroid, objective) = modular_fixture(dir.path());
    let out1 = dir.path().join("a.json");
    let out2 = dir.path().join("b.json");
    for out in [&out1, &out2] {
        let output = run(submax()
            .arg("solve")
            .args(["--matroid", matroid.to_str().unwrap()])
            .args(["--objective", objective.to_str().unwrap()])
            .args(["--epsilon", "0.2", "--seed", "9"])
            .args(["--out", out.to_str().unwrap()]));
        assert!(output.status.success(), "{output:?}");
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "same seed must give byte-identical reports");

    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["schema"], "solve-report/v1");
    assert_eq!(report["seed"], 9);
    assert_eq!(report["solution"], serde_json::json!([0, 2]));
    assert_eq!(report["value"], 7.0);
    let phases = report["queries"]["phases"].as_object().unwrap();
    assert!(phases.contains_key("relaxation"));
    assert!(phases.contains_key("rounding"));
    // phase counts sum to the totals
    for kind in ["independence", "rank", "value"] {
        let total: u64 = phases.values().map(|p| p[kind].as_u64().unwrap()).sum();
        assert_eq!(total, report["queries"]["total"][kind].as_u64().unwrap());
    }
}

#[test]
fn solve_distinct_seeds_may_differ_but_stay_valid() {
    let dir = tempfile::tempdir().unwrap();
    let (matroid, objective) = modular_fixture(dir.path());
    let out = dir.path().join("o.json");
    let output = run(submax()
        .arg("solve")
        .args(["--matroid", matroid.to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "0.2", "--seed", "10"])
        .args(["--out", out.to_str().unwrap()]));
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["solution"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_missing_file_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (_, objective) = modular_fixture(dir.path());
    let output = run(submax()
        .arg("solve")
        .args(["--matroid", dir.path().join("nope.json").to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "0.2"])
        .args(["--out", dir.path().join("o.json").to_str().unwrap()]));
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn solve_malformed_instance_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (matroid, objective) = modular_fixture(dir.path());
    write(&matroid, r#"{"type":"uniform","n":4,"rank":9}"#);
    let output = run(submax()
        .arg("solve")
        .args(["--matroid", matroid.to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "0.2"])
        .args(["--out", dir.path().join("o.json").to_str().unwrap()]));
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // mismatched ground sets are also caught at load time
    write(&matroid, r#"{"type":"uniform","n":5,"rank":2}"#);
    let output = run(submax()
        .arg("solve")
        .args(["--matroid", matroid.to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "0.2"])
        .args(["--out", dir.path().join("o.json").to_str().unwrap()]));
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn solve_infeasible_epsilon_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let (matroid, objective) = modular_fixture(dir.path());
    let output = run(submax()
        .arg("solve")
        .args(["--matroid", matroid.to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "1.5"])
        .args(["--out", dir.path().join("o.json").to_str().unwrap()]));
    assert_eq!(output.status.code(), Some(3), "{output:?}");
}

#[test]
fn env_override_must_parse() {
    let dir = tempfile::tempdir().unwrap();
    let (matroid, objective) = modular_fixture(dir.path());
    let output = run(submax()
        .env("SUBMAX_BUDGET_CONSTANT", "not-a-number")
        .arg("solve")
        .args(["--matroid", matroid.to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "0.2"])
        .args(["--out", dir.path().join("o.json").to_str().unwrap()]));
    assert_eq!(output.status.code(), Some(3), "{output:?}");

    let output = run(submax()
        .env("SUBMAX_SAMPLES_PER_ESTIMATE", "8")
        .env("SUBMAX_BUDGET_CONSTANT", "16")
        .arg("solve")
        .args(["--matroid", matroid.to_str().unwrap()])
        .args(["--objective", objective.to_str().unwrap()])
        .args(["--epsilon", "0.2", "--seed", "4"])
        .args(["--out", dir.path().join("o.json").to_str().unwrap()]));
    assert!(output.status.success(), "{output:?}");
}

#[test]
fn bench_scaling_writes_schema_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scaling.csv");
    let output = run(submax()
        .arg("bench-scaling")
        .args([
            "--r-grid", "4,6,8", "--t", "3", "--trials", "2", "--seed", "1",
        ])
        .args(["--out", out.to_str().unwrap()]));
    assert!(output.status.success(), "{output:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema bench-scaling/v1"));
    assert_eq!(
        lines.next(),
        Some("r,t,algorithm,trial,independence_queries,wall_time_ns")
    );
    let data: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(data.len(), 3 * 2 * 2, "one row per (r, algorithm, trial)");
    for row in &data {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 6);
        assert!(cols[2] == "classic" || cols[2] == "fast");
    }
    assert!(text.lines().any(|l| l.starts_with("# slope classic ")));
    assert!(text.lines().any(|l| l.starts_with("# slope fast ")));
}

#[test]
fn bench_scaling_small_grid_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(submax()
        .arg("bench-scaling")
        .args(["--r-grid", "4,6", "--trials", "1"])
        .args(["--out", dir.path().join("s.csv").to_str().unwrap()]));
    assert_eq!(output.status.code(), Some(3), "{output:?}");
}

#[test]
fn verify_reports_z_scores_and_verdict() {
    let output = run(submax().arg("verify").args([
        "--suite",
        "cycle-validity",
        "--trials",
        "50",
        "--seed",
        "3",
    ]));
    assert!(output.status.success(), "{output:?}");
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("# schema verify-report/v1"));
    assert!(text.contains("suite cycle-validity trials 50"));
    assert!(text.contains("check validated-cycles"));
    assert!(text.trim_end().ends_with("verdict pass"));
}

#[test]
fn verify_unknown_suite_is_exit_2() {
    let output = run(submax().arg("verify").args(["--suite", "bogus"]));
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn verify_martingale_small_run_passes() {
    let output = run(submax().arg("verify").args([
        "--suite",
        "martingale",
        "--trials",
        "2000",
        "--seed",
        "5",
    ]));
    assert!(output.status.success(), "{output:?}");
}

#[test]
fn shipped_instances_solve_end_to_end() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = run(submax()
        .arg("solve")
        .args([
            "--matroid",
            root.join("instances/partition12.matroid.json")
                .to_str()
                .unwrap(),
        ])
        .args([
            "--objective",
            root.join("instances/coverage12.objective.json")
                .to_str()
                .unwrap(),
        ])
        .args(["--epsilon", "0.2", "--seed", "1"])
        .args(["--out", out.to_str().unwrap()]));
    assert!(output.status.success(), "{output:?}");
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["solution"].as_array().unwrap().len(), 4);
    assert!(report["value"].as_f64().unwrap() > 0.0);
    assert!(report["queries"]["total"]["value"].as_u64().unwrap() > 0);
}
