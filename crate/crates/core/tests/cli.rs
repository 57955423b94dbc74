use std::process::{Command, Output};

use serde_json::Value;

use qwalk::cli::{parse_run_csv, RunOutput};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .env_remove("WALK_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qwalk(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    v.as_f64().is_some_and(|x| (x - want).abs() < tol)
}

#[test]
fn exit_codes() {
    assert_eq!(qwalk(&["run", "--n", "2", "--exact"]).status.code(), Some(0));
    assert_eq!(qwalk(&["run", "--n", "2", "--exact", "--shots", "5"]).status.code(), Some(2));
    assert_eq!(qwalk(&["run", "--n", "2", "--flavor", "sideways"]).status.code(), Some(2));
    assert_eq!(qwalk(&["frobnicate"]).status.code(), Some(2));
    let too_big = qwalk(&["run", "--n", "40", "--exact"]);
    assert_eq!(too_big.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&too_big.stderr).starts_with("error:"));
    assert_eq!(qwalk(&["variance", "--n", "3", "--max-steps", "4"]).status.code(), Some(1));
}

#[test]
fn run_exact_examples() {
    let v = json(&["run", "--n", "2", "--steps", "1", "--exact"]);
    let d = v["distribution"].as_object().unwrap();
    assert_eq!(d.len(), 2);
    assert!(close(&d["1"], 0.5, 1e-12) && close(&d["3"], 0.5, 1e-12));

    let v = json(&["run", "--n", "3", "--steps", "0", "--exact"]);
    assert!(close(&v["distribution"]["0"], 1.0, 1e-12));

    let v = json(&["run", "--n", "3", "--steps", "3", "--flavor", "rotations", "--exact"]);
    let d = v["distribution"].as_object().unwrap();
    assert_eq!(d.keys().collect::<Vec<_>>(), ["1", "3", "5", "7"]);
    assert!(close(&d["7"], 0.625, 1e-12));
    for k in ["1", "3", "5"] {
        assert!(close(&d[k], 0.125, 1e-12));
    }
    for key in ["spec", "distribution", "ci", "meta"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["seed", "shots", "flavor", "version"] {
        assert!(v["meta"].get(key).is_some(), "{key}");
    }
}

#[test]
fn resources_examples() {
    let v = json(&["resources", "--n", "3", "--flavor", "inverters"]);
    assert_eq!(v["formula_gate_count"], 21);
    assert_eq!(v["qubit_count"], 6);
    assert!(v["exec_time"].is_null() && v["quantum_volume"].is_null());

    let v = json(&[
        "resources", "--n", "3", "--flavor", "rotations", "--workspace", "6", "--eps", "0.031", "--machine-qubits",
        "15",
    ]);
    assert!(close(&v["quantum_volume"], 28.905, 0.01));

    let v = json(&["resources", "--n", "1", "--flavor", "rotations"]);
    assert_eq!(v["formula_gate_count"], 7);
    assert_eq!(v["qubit_count"], 2);
}

#[test]
fn resources_with_duration_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("durations.txt");
    std::fs::write(&path, "# kind seconds\nx 1\nh 1\ncx 2\ntoffoli 6\n").unwrap();
    let v = json(&["resources", "--n", "2", "--durations", path.to_str().unwrap()]);
    // H + 2 CX + 2 Toffoli + 6 X
    assert!(close(&v["exec_time"], 1.0 + 4.0 + 12.0 + 6.0, 1e-12));

    std::fs::write(&path, "x 1\nh 1\n").unwrap();
    assert_eq!(qwalk(&["resources", "--n", "2", "--durations", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn variance_csv() {
    let out = qwalk(&["variance", "--n", "8", "--max-steps", "40"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,sigma2_sim,sigma2_theory"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[0][1], 0.0);
    assert!((rows[10][2] - 20.71).abs() < 0.01);
    assert!((rows[3][1] - 2.75).abs() < 1e-9);
}

#[test]
fn compare_flavors() {
    let v = json(&["compare", "--n", "4", "--steps", "2"]);
    assert!(v["exact_tv_between_flavors"].as_f64().unwrap() < 1e-9);
    assert!(close(&v["gate_count_ratio"], 65.0 / 37.0, 1e-12));

    let v = json(&["compare", "--n", "3", "--p-gate", "0.01", "--shots", "2000", "--seed", "4"]);
    assert_eq!(v["flavors"]["inverters"]["qubit_count"], 6);
    assert_eq!(v["flavors"]["rotations"]["qubit_count"], 4);
    assert!(v["flavors"]["rotations"]["noisy_tv"].as_f64().is_some());
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["run", "--n", "3", "--steps", "2", "--shots", "3000", "--batches", "3", "--p-gate", "0.01", "--seed", "9"];
    let a = qwalk(&args);
    let b = qwalk(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let base = ["run", "--n", "3", "--steps", "2", "--shots", "3000", "--p-meas", "0.05"];
    let env_a = Command::new(env!("CARGO_BIN_EXE_qwalk")).args(base).env("WALK_SEED", "17").output().unwrap();
    let env_b = Command::new(env!("CARGO_BIN_EXE_qwalk")).args(base).env("WALK_SEED", "17").output().unwrap();
    let flag = qwalk(&[&base[..], &["--seed", "17"]].concat());
    assert_eq!(env_a.stdout, env_b.stdout);
    assert_eq!(env_a.stdout, flag.stdout);
    let v: Value = serde_json::from_slice(&env_a.stdout).unwrap();
    assert_eq!(v["meta"]["seed"], 17);
}

#[test]
fn json_and_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let jpath = dir.path().join("run.json");
    let cpath = dir.path().join("run.csv");
    let common = ["run", "--n", "4", "--steps", "5", "--shots", "4000", "--seed", "3"];
    assert!(qwalk(&[&common[..], &["--out", jpath.to_str().unwrap()]].concat()).status.success());
    assert!(qwalk(&[&common[..], &["--format", "csv", "--out", cpath.to_str().unwrap()]].concat()).status.success());

    let parsed: RunOutput = serde_json::from_str(&std::fs::read_to_string(&jpath).unwrap()).unwrap();
    let from_json = parsed.to_distribution();
    let from_csv = parse_run_csv(&std::fs::read_to_string(&cpath).unwrap(), 16).unwrap();
    for k in 0..16 {
        assert!((from_json.get(k) - from_csv.get(k)).abs() < 1e-12);
    }
    assert!((from_json.total() - 1.0).abs() < 1e-12);
    assert!(parsed.ci.values().all(|&h| h > 0.0));
}
