//! End-to-end tests of the command-line surface: formats, determinism and
//! exit codes.

use std::process::{Command, Output};

fn calbch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calbch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn beta_csv_contains_reference_cells() {
    let out = calbch(&["beta", "--max-degree", "7", "--engine", "genfun", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("p,q,value\n"));
    assert!(text.contains("1,2,1/3\n"));
    assert!(text.contains("2,1,-1/3\n"));
    assert!(text.contains("4,1,1/45\n"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["beta", "--max-degree", "9", "--engine", "recursion", "--format", "json"];
    let first = calbch(&args);
    let second = calbch(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn alpha_rejects_genfun_engine() {
    let out = calbch(&["alpha", "--max-degree", "7", "--engine", "genfun"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degree_bound_is_a_usage_error() {
    let out = calbch(&["beta", "--max-degree", "99", "--engine", "hopf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max-degree"));
}

#[test]
fn unknown_flags_exit_two() {
    let out = calbch(&["beta", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bch_series_starts_with_generators() {
    let out = calbch(&["bch", "--max-degree", "3", "--product", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("a 1/1"));
    assert!(text.contains("b 1/1"));
    assert!(text.contains("E(0,1) 1/3"));
    assert!(text.contains("E(1,0) -1/3"));
}

#[test]
fn verify_oracle_passes() {
    let out = calbch(&["verify", "--suite", "oracle", "--degree", "6"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).lines().all(|l| l.starts_with("ok")));
}

#[test]
fn verify_hopf_single_identity_json() {
    let out = calbch(&[
        "verify",
        "--suite",
        "hopf",
        "--identity",
        "dot_comm",
        "--degree",
        "4",
        "--json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["suite"], "hopf");
    assert_eq!(doc["passed"], true);
}

#[test]
fn verify_lts_flags_counterexample_with_exit_one() {
    let dir = std::env::temp_dir().join("calbch-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("counterexample.json");
    std::fs::write(
        &path,
        r#"{
            "dim": 2,
            "labels": ["e", "f"],
            "triples": [
                {"p": 0, "q": 1, "r": 0, "out": [{"idx": 0, "value": "1/1"}]},
                {"p": 0, "q": 1, "r": 1, "out": [{"idx": 1, "value": "-1/1"}]}
            ]
        }"#,
    )
    .unwrap();
    let out = calbch(&[
        "verify",
        "--suite",
        "lts",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_bch_suite_small_degree() {
    let out = calbch(&["verify", "--suite", "bch", "--degree", "4"]);
    assert!(out.status.success(), "stdout: {}", stdout(&out));
}

#[test]
fn cross_validate_small_passes() {
    let out = calbch(&[
        "cross-validate",
        "--series-degree",
        "7",
        "--hopf-degree",
        "5",
        "--dot-direct-degree",
        "4",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all engines agree"));
}

#[test]
fn log_output_goes_to_stderr_only() {
    let out = Command::new(env!("CARGO_BIN_EXE_calbch"))
        .args(["beta", "--max-degree", "5", "--engine", "matrix"])
        .env("CALBCH_LOG", "info")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("matrix engine"));
    assert!(stdout(&out).starts_with("p,q,value\n"));
}

#[test]
fn latex_table_has_seven_columns_at_degree_fourteen() {
    let out = calbch(&["beta", "--max-degree", "14", "--format", "latex"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("\\begin{array}{rrrrrrr}"));
    assert_eq!(text.lines().count(), 2 + 7);
    assert!(text.contains("-\\frac{48896}{212837625}"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("calbch-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("beta.csv");
    let out = calbch(&[
        "beta",
        "--max-degree",
        "5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("1,2,1/3"));
}
