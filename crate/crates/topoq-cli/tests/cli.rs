//! End-to-end tests of the command-line interface: documented examples,
//! exit codes, error documents, stdin input, file output, determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topoq"))
}

fn run_with_file(args: &[&str], spec: &str) -> Output {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    file.write_all(spec.as_bytes()).expect("write spec");
    let path = file.path().to_str().expect("utf-8 path").to_owned();
    let mut full: Vec<&str> = args.to_vec();
    full.push("--spec");
    full.push(&path);
    binary().args(&full).output().expect("run binary")
}

fn run_with_stdin(args: &[&str], spec: &str) -> Output {
    let mut child = binary()
        .args(args)
        .arg("--spec")
        .arg("-")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    child
        .stdin
        .as_mut()
        .expect("stdin handle")
        .write_all(spec.as_bytes())
        .expect("write stdin");
    child.wait_with_output().expect("wait for binary")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn stderr_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stderr).expect("stderr is JSON")
}

#[test]
fn single_shot_search_certainty_example() {
    let out = run_with_file(
        &["grover"],
        r#"{"group":{"kind":"cyclic","n":2},"function":[1,0,0,0]}"#,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["command"], "grover");
    let p0 = doc["outcomes"][0]["p"].as_f64().unwrap();
    assert!((p0 - 1.0).abs() < 1e-9);
    assert_eq!(doc["outcomes"][0]["label"], 0);
    assert_eq!(doc["support"], serde_json::json!([0]));
}

#[test]
fn hidden_subgroup_example() {
    let out = run_with_file(
        &["hsp"],
        r#"{"group":{"kind":"cyclic","n":4},"function":[0,1,0,1]}"#,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["hidden_subgroup"], serde_json::json!([0, 2]));
    assert_eq!(doc["reconstructed_subgroup"], serde_json::json!([0, 2]));
    assert_eq!(doc["trials"], 32);
    assert_eq!(doc["seed"], 0);
    let probs: Vec<f64> = (0..4)
        .map(|i| doc["outcomes"][i]["p"].as_f64().unwrap())
        .collect();
    assert!((probs[0] - 0.5).abs() < 1e-9);
    assert!(probs[1].abs() < 1e-9);
    assert!(probs[2].abs() < 1e-9);
    assert!((probs[3] - 0.5).abs() < 1e-9);
    let counts: Vec<u64> = doc["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    assert_eq!(counts.iter().sum::<u64>(), 32);
}

#[test]
fn verification_suite_passes_for_the_symmetric_group() {
    let out = run_with_file(&["verify"], r#"{"group":{"kind":"symmetric","n":3}}"#);
    let doc = stdout_json(&out);
    assert_eq!(doc["all_pass"], true);
    assert_eq!(doc["group_order"], 6);
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
    for prefix in ["structure:", "spider:", "repnorm", "copyonleg", "mdecomp", "classify"] {
        assert!(
            checks
                .iter()
                .any(|c| c["name"].as_str().unwrap().starts_with(prefix)),
            "no check named {prefix}*"
        );
    }
}

#[test]
fn verification_suite_reports_quaternion_irrep_dimensions() {
    let out = run_with_file(&["verify"], r#"{"group":{"kind":"quaternion"}}"#);
    let doc = stdout_json(&out);
    assert_eq!(doc["all_pass"], true);
    let checks = doc["checks"].as_array().unwrap();
    let dims = checks
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with("irrep-dimensions"))
        .expect("dimension check present");
    assert_eq!(dims["name"], "irrep-dimensions:[1, 1, 1, 1, 2]");
}

#[test]
fn constant_vs_balanced_on_an_unpromised_input() {
    let out = run_with_file(&["dj"], r#"{"function":[0,0,0,1]}"#);
    let doc = stdout_json(&out);
    assert!((doc["success_probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(doc["verdict"], "Inconclusive");
}

#[test]
fn generalized_decision_via_projector_spec() {
    let out = run_with_file(
        &["gdj"],
        r#"{"group":{"kind":"cyclic","n":3},"function":[0,1,2,0,1,2],"projectors":{"kind":"single","irrep":1}}"#,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "Balanced");
    assert!(doc["success_probability"].as_f64().unwrap() < 1e-9);
}

#[test]
fn generalized_search_worked_example() {
    let out = run_with_file(
        &["ggrover"],
        r#"{"group":{"kind":"cyclic","n":3},"function":[0,0,0,0,1,2],"projectors":{"kind":"single","irrep":1}}"#,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["support"], serde_json::json!([4, 5]));
    assert_eq!(doc["balanced_elements"], serde_json::json!([0, 1, 2, 3]));
    assert!((doc["outcomes"][4]["p"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((doc["outcomes"][5]["p"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn spec_is_read_from_stdin() {
    let out = run_with_stdin(&["dj"], r#"{"function":[1,1,1,1]}"#);
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "Constant");
}

#[test]
fn result_is_written_to_the_output_file() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("result.json");
    let out = run_with_stdin(
        &["dj", "--out", path.to_str().unwrap()],
        r#"{"function":[0,1,0,1]}"#,
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("output file");
    let doc: Value = serde_json::from_str(&text).expect("file is JSON");
    assert_eq!(doc["verdict"], "Balanced");
}

#[test]
fn identical_jobs_produce_byte_identical_output() {
    let spec = r#"{"group":{"kind":"dihedral","n":4},"function":[0,1,2,3,4,5,6,7]}"#;
    let first = run_with_file(&["hsp"], spec);
    let second = run_with_file(&["hsp"], spec);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let third = run_with_file(&["irreps"], r#"{"group":{"kind":"dihedral","n":4}}"#);
    let fourth = run_with_file(&["irreps"], r#"{"group":{"kind":"dihedral","n":4}}"#);
    assert!(third.status.success());
    assert_eq!(third.stdout, fourth.stdout);
}

#[test]
fn seed_flag_overrides_the_job_file_and_is_echoed() {
    let spec = r#"{"group":{"kind":"cyclic","n":4},"function":[0,1,0,1],"seed":2}"#;
    let out = run_with_file(&["hsp", "--seed", "5"], spec);
    let doc = stdout_json(&out);
    assert_eq!(doc["seed"], 5);
    let out = run_with_file(&["hsp"], spec);
    let doc = stdout_json(&out);
    assert_eq!(doc["seed"], 2);
}

#[test]
fn irreps_command_reports_the_decomposition() {
    let out = run_with_file(&["irreps"], r#"{"group":{"kind":"cyclic","n":4}}"#);
    let doc = stdout_json(&out);
    assert_eq!(doc["order"], 4);
    let irreps = doc["irreps"].as_array().unwrap();
    assert_eq!(irreps.len(), 4);
    assert!(irreps.iter().all(|r| r["dim"] == 1));
}

#[test]
fn missing_function_is_a_validation_error() {
    let out = run_with_file(&["dj"], r#"{"group":{"kind":"cyclic","n":2}}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "missing-field");
}

#[test]
fn malformed_json_is_a_validation_error() {
    let out = run_with_file(&["dj"], "{not json");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "bad-spec");
}

#[test]
fn unknown_spec_fields_are_rejected() {
    let out = run_with_file(&["dj"], r#"{"function":[0,1],"functions":[0,1]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "bad-spec");
}

#[test]
fn broken_coset_promise_is_a_validation_error() {
    let out = run_with_file(
        &["hsp"],
        r#"{"group":{"kind":"cyclic","n":4},"function":[0,1,2,1]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "promise-violated");
    assert!(err["error"]["detail"]
        .as_str()
        .unwrap()
        .contains("elements 1 and 3"));
}

#[test]
fn wrong_order_group_for_the_boolean_protocols_is_rejected() {
    let out = run_with_file(
        &["grover"],
        r#"{"group":{"kind":"cyclic","n":3},"function":[0,1,0,1]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "wrong-codomain");
}

#[test]
fn function_values_outside_the_group_are_rejected() {
    let out = run_with_file(
        &["gdj"],
        r#"{"group":{"kind":"cyclic","n":3},"function":[0,3],"projectors":{"kind":"identity"}}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "bad-function");
}

#[test]
fn explicit_projector_matrices_are_accepted() {
    // Projector family on Z2: zero on the trivial class, identity on
    // the sign class, written out entry by entry.
    let out = run_with_file(
        &["gdj"],
        r#"{"group":{"kind":"cyclic","n":2},"function":[0,1,1,0],"projectors":{"kind":"explicit","matrices":[[[0.0,0.0]],[[1.0,0.0]]]}}"#,
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "Balanced");
}

#[test]
fn non_projector_matrices_are_rejected() {
    let out = run_with_file(
        &["gdj"],
        r#"{"group":{"kind":"cyclic","n":2},"function":[0,1],"projectors":{"kind":"explicit","matrices":[[[0.5,0.5]],[[0.0,0.0]]]}}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "representation");
}
