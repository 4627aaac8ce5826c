use std::process::{Command, Output};

use bellkit::bell::multi_bell;
use bellkit::circuit::Circuit;
use bellkit::linalg::{residual, CMatrix};
use bellkit::pauli::BitString;
use bellkit::Report;

fn bellkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellkit")).args(args).env_remove("BELLKIT_SEED").output().unwrap()
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("report json on stdout")
}

#[test]
fn passing_suite_exits_zero_with_report() {
    let out = bellkit(&["verify", "gram", "--family", "qudit", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r.pass);
    assert_eq!(r.suite, "gram");
    assert!(r.wall_ms.is_none());
}

#[test]
fn failing_gate_exits_one() {
    let out = bellkit(&["verify", "ybe", "--gate", "cnot"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!report(&out).pass);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn trace_constraint_passes() {
    assert_eq!(bellkit(&["verify", "trace-constraint", "--n", "2"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bellkit(&["verify", "nonsense"]).status.code(), Some(2));
    let tight = bellkit(&["verify", "gram", "--tol", "1e-16"]);
    assert_eq!(tight.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&tight.stderr).contains("error"));
    assert_eq!(bellkit(&["verify", "teleport-eq", "--variant", "bogus"]).status.code(), Some(2));
    assert_eq!(bellkit(&["circuit", "--n", "2", "--alpha", "101"]).status.code(), Some(2));
    assert_eq!(bellkit(&["teleport", "--variant", "qutrit"]).status.code(), Some(2));
}

#[test]
fn seed_env_matches_flag() {
    let flag = bellkit(&["verify", "basis-theorem", "--seed", "11"]);
    let env = Command::new(env!("CARGO_BIN_EXE_bellkit"))
        .args(["verify", "basis-theorem"])
        .env("BELLKIT_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(report(&flag).seed, Some(11));
    let other = bellkit(&["verify", "basis-theorem", "--seed", "12"]);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn timing_and_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("twist.json");
    let out = bellkit(&["verify", "twist", "--n", "3", "--timing", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("twist:"));
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.wall_ms.is_some());
    assert_eq!(r.params["n"], "3");
}

#[test]
fn teleport_summaries() {
    let out = bellkit(&["teleport", "--d", "2", "--samples", "1000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "bellkit-teleport/1");
    assert_eq!(v["pass"], true);
    let counts: usize = v["run"]["counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap() as usize).sum();
    assert_eq!(counts, 1000);
    assert!((v["deterministic_min_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let out = bellkit(&["teleport", "--variant", "nqubit", "--n", "2", "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["run"]["labels"].as_array().unwrap().len(), 16);
}

#[test]
fn single_pair_circuit_is_h_then_cx() {
    let out = bellkit(&["circuit", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().skip(3).collect();
    assert_eq!(body, ["h q[0];", "cx q[0],q[1];"]);
}

#[test]
fn exported_circuit_prepares_the_labelled_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prep.qasm");
    let out = bellkit(&["circuit", "--n", "2", "--alpha", "10", "--beta", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = Circuit::from_qasm(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let state = c.apply(&CMatrix::basis_ket(16, 0)).unwrap();
    let alpha: BitString = "10".parse().unwrap();
    let beta: BitString = "11".parse().unwrap();
    let expected = multi_bell(2, &alpha, &beta).unwrap();
    assert!(residual(&state, &expected).unwrap() < 1e-12);
    let col = c.to_matrix().unwrap();
    assert!(residual(&CMatrix::column((0..16).map(|i| col[(i, 0)]).collect()), &expected).unwrap() < 1e-12);
}

#[test]
fn twist_circuit_counts_swaps() {
    let out = bellkit(&["circuit", "--twist", "3"]);
    let c = Circuit::from_qasm(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(c.wires(), 6);
    assert_eq!(c.count("swap"), 3);
    assert_eq!(c.len(), 3);
}
