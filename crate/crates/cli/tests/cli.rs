//! End-to-end tests driving the compiled binary: output formats, exit
//! codes, and the file-based verify/bounds flows.

use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn nnrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn emit_a_csv_matches_pinned_digest() {
    let output = nnrank(&["emit", "A", "--format", "csv"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    assert_eq!(text.lines().count(), 21);
    assert!(text.lines().all(|l| l.split(',').count() == 21));
    let digest = format!("{:x}", Sha256::digest(text.as_bytes()));
    assert_eq!(
        digest,
        "f1df4303aae002c8e04df64ec04b5e0043bb0f318cbb6f7259398b96f749971e"
    );
}

#[test]
fn emit_c_with_params_is_5x5_json() {
    let output = nnrank(&["emit", "C", "--params", "1,1,1,1,1"]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["rows"], 5);
    assert_eq!(doc["cols"], 5);
    assert_eq!(doc["field"], "Q");
}

#[test]
fn emit_m1_uses_quadratic_scalars() {
    let output = nnrank(&["emit", "M1"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    assert!(text.contains("\"Q(sqrt 2)\""));
    assert!(text.contains("0+1*sqrt(2)"));
    assert!(text.contains("1+1/2*sqrt(2)"));
}

#[test]
fn emit_m1_csv_is_a_usage_error() {
    let output = nnrank(&["emit", "M1", "--format", "csv"]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn emit_rejects_bad_params() {
    assert_eq!(exit_code(&nnrank(&["emit", "C", "--params", "1,2"])), 2);
    assert_eq!(exit_code(&nnrank(&["emit", "B", "--params", "-1"])), 2);
    assert_eq!(exit_code(&nnrank(&["emit", "nosuch"])), 2);
}

fn write_cert(dir: &Path) -> std::path::PathBuf {
    let output = nnrank(&["cert", "A"]);
    assert_eq!(exit_code(&output), 0);
    let path = dir.join("cert_A.json");
    std::fs::write(&path, stdout(&output)).unwrap();
    path
}

#[test]
fn verify_certificate_against_a() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write_cert(dir.path());
    let output = nnrank(&["verify", cert.to_str().unwrap(), "A"]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["factor_count"], 19);

    let pretty = nnrank(&["verify", cert.to_str().unwrap(), "A", "--pretty"]);
    assert!(stdout(&pretty).contains("19 factors, sum exact, all nonnegative"));
}

#[test]
fn verify_tampered_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write_cert(dir.path());
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["factors"][0]["u"][1] = serde_json::Value::String("9/7".to_string());
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, doc.to_string()).unwrap();

    let output = nnrank(&["verify", tampered.to_str().unwrap(), "A"]);
    assert_eq!(exit_code(&output), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["valid"], false);
    assert!(report["first_mismatch"].is_object());
}

#[test]
fn verify_dimension_mismatch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write_cert(dir.path());
    let output = nnrank(&["verify", cert.to_str().unwrap(), "V"]);
    assert_eq!(exit_code(&output), 2);
    assert!(!output.stderr.is_empty());
}

#[test]
fn verify_unreadable_certificate_exits_two() {
    let output = nnrank(&["verify", "/no/such/file.json", "A"]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn bounds_v_reports_both_lower_bounds() {
    let output = nnrank(&["bounds", "V", "--witness"]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["rank_lb"], 3);
    assert_eq!(doc["rectangle_cover_lb"], 4);
    assert_eq!(doc["bracket"]["lower"], 4);
    assert!(doc["bracket"]["upper"].is_null());
    assert_eq!(doc["cover"].as_array().unwrap().len(), 4);
}

#[test]
fn bounds_ones_matrix() {
    let output = nnrank(&["bounds", "ones4x4"]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["rank_lb"], 1);
    assert_eq!(doc["rectangle_cover_lb"], 1);
    assert_eq!(doc["bracket"]["lower"], 1);
}

#[test]
fn bounds_a_with_certificate_brackets_at_19() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write_cert(dir.path());
    let output = nnrank(&["bounds", "A", "--cert", cert.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["bracket"]["upper"], 19);
    assert_eq!(doc["bracket"]["lower"], 19);
    assert_eq!(doc["rank_lb"], 17);
}

#[test]
fn bounds_with_invalid_certificate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write_cert(dir.path());
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["factors"].as_array_mut().unwrap().pop();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, doc.to_string()).unwrap();
    let output = nnrank(&["bounds", "A", "--cert", broken.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn bounds_reads_matrix_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = nnrank(&["emit", "V"]);
    let path = dir.path().join("V.json");
    std::fs::write(&path, stdout(&emitted)).unwrap();
    let output = nnrank(&["bounds", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["rank_lb"], 3);
}

#[test]
fn claims_all_pass_with_one_skip() {
    let output = nnrank(&["claims"]);
    assert_eq!(exit_code(&output), 0);
    let docs: Vec<serde_json::Value> = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(docs.len(), 11);
    for doc in &docs {
        assert_ne!(doc["status"], "FAIL", "{doc}");
    }
    let skipped: Vec<&serde_json::Value> =
        docs.iter().filter(|d| d["status"] == "SKIPPED").collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0]["id"], "rankplus-A-rational-geq-20");
}

#[test]
fn claims_filter_selects_single_row() {
    let output = nnrank(&["claims", "--filter", "rankplus-V-equals-4"]);
    assert_eq!(exit_code(&output), 0);
    let docs: Vec<serde_json::Value> = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(docs.len(), 1);
    assert_eq!(docs[0]["status"], "PASS");

    assert_eq!(exit_code(&nnrank(&["claims", "--filter", "bogus"])), 2);
}

#[test]
fn nmf_probe_runs_and_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("residuals.csv");
    let output = nnrank(&[
        "nmf",
        "V",
        "--k",
        "4",
        "--restarts",
        "2",
        "--max-iters",
        "500",
        "--seed",
        "1",
        "--residual-table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(doc["residual"].as_f64().unwrap() >= 0.0);
    assert_eq!(doc["k"], 4);
    let table_text = std::fs::read_to_string(&table).unwrap();
    assert!(table_text.starts_with("restart,residual,iterations\n"));
    assert_eq!(table_text.lines().count(), 3);
}

#[test]
fn nmf_usage_errors_exit_two() {
    assert_eq!(exit_code(&nnrank(&["nmf", "A"])), 2); // missing --k
    assert_eq!(exit_code(&nnrank(&["nmf", "A", "--k", "0"])), 2);
}
