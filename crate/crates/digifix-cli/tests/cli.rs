//! End-to-end tests of the binary: document round trips, exit codes, and
//! the machine-readable summary line.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn digifix(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digifix"))
        .args(args)
        .current_dir(dir)
        .env_remove("DIGIFIX_BUDGET")
        .output()
        .expect("binary runs")
}

fn write_doc(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("write document");
    path.to_str().expect("utf8 path").to_string()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn machine_line(output: &Output) -> String {
    stdout(output)
        .lines()
        .rev()
        .find(|l| l.starts_with("digifix cmd="))
        .expect("machine line present")
        .to_string()
}

const HOLDING_DOC: &str = r#"{
  "dimension": 1,
  "points": [[0], [1], [3]],
  "adjacency": {"kind": "c_u", "u": 1},
  "metric": {"kind": "lp", "p": 1.0},
  "map": {"kind": "table", "pairs": [[0, 0], [1, 0], [2, 1]]},
  "condition": {"variant": "banach", "coefficients": [0.75]}
}"#;

#[test]
fn check_reports_a_holding_condition_and_exits_zero() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(dir.path(), "holds.json", HOLDING_DOC);
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("holds: yes"), "{text}");
    assert!(text.contains("pairs checked: 6"), "{text}");
    assert_eq!(
        machine_line(&out),
        "digifix cmd=check holds=true pairs=6 margin=0.5 tightest=1,2 witness=-"
    );
}

#[test]
fn check_accepts_point_pairs_in_place_of_indices() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "points.json",
        r#"{
          "dimension": 1,
          "points": [[0], [1], [3]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "map": {"kind": "table", "pairs": [[[0], [0]], [[1], [0]], [[3], [1]]]},
          "condition": {"variant": "banach", "coefficients": [0.75]}
        }"#,
    );
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(machine_line(&out).contains("holds=true"));
}

#[test]
fn check_exits_one_when_the_condition_fails() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "fails.json",
        r#"{
          "dimension": 1,
          "points": [[0], [1]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "map": {"kind": "table", "pairs": [[0, 1], [1, 0]]},
          "condition": {"variant": "banach", "coefficients": [0.5]}
        }"#,
    );
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("holds: no"), "{text}");
    assert!(text.contains("first violation: pair (0, 1)"), "{text}");
}

#[test]
fn malformed_json_exits_two() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(dir.path(), "broken.json", "{not json");
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("cannot parse"), "{err}");
}

#[test]
fn missing_file_exits_two() {
    let dir = TempDir::new().unwrap();
    let out = digifix(&["check", "no-such-file.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_domain_coefficients_exit_three() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "badcoef.json",
        r#"{
          "dimension": 1,
          "points": [[0], [1]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "map": {"kind": "table", "pairs": [[0, 1], [1, 0]]},
          "condition": {"variant": "banach", "coefficients": [1.5]}
        }"#,
    );
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn a_non_total_map_exits_three() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "partial.json",
        r#"{
          "dimension": 1,
          "points": [[0], [1], [2]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "map": {"kind": "table", "pairs": [[0, 1], [1, 0]]},
          "condition": {"variant": "banach", "coefficients": [0.5]}
        }"#,
    );
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("never assigns"), "{err}");
}

#[test]
fn an_unknown_condition_variant_exits_three() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "variant.json",
        r#"{
          "dimension": 1,
          "points": [[0], [1]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "map": {"kind": "table", "pairs": [[0, 1], [1, 0]]},
          "condition": {"variant": "zeno", "coefficients": [0.5]}
        }"#,
    );
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fpp_over_budget_exits_four_and_env_override_lifts_it() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "nine.json",
        r#"{
          "dimension": 1,
          "points": [[0],[1],[2],[3],[4],[5],[6],[7],[8]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0}
        }"#,
    );
    let over = digifix(&["fpp", &doc], dir.path());
    assert_eq!(over.status.code(), Some(4));

    let lifted = Command::new(env!("CARGO_BIN_EXE_digifix"))
        .args(["fpp", &doc])
        .env("DIGIFIX_BUDGET", "9")
        .output()
        .expect("binary runs");
    assert_eq!(lifted.status.code(), Some(0));
    assert!(machine_line(&lifted).contains("has_property=false"));
}

#[test]
fn fixed_points_lists_the_inventory_and_the_unique_solution() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(dir.path(), "solve.json", HOLDING_DOC);
    let out = digifix(&["fixed-points", &doc], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fixed points: 0 (0)"), "{text}");
    assert!(text.contains("unique fixed point at index 0"), "{text}");
    assert_eq!(
        machine_line(&out),
        "digifix cmd=fixed-points count=1 fixed=0 unique=0"
    );
}

#[test]
fn fixed_points_still_reports_when_the_condition_fails() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "swap.json",
        r#"{
          "dimension": 1,
          "points": [[0], [1]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "map": {"kind": "table", "pairs": [[0, 1], [1, 0]]},
          "condition": {"variant": "banach", "coefficients": [0.5]}
        }"#,
    );
    let out = digifix(&["fixed-points", &doc], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fixed points: none"), "{text}");
    assert!(text.contains("does not hold"), "{text}");
    assert!(machine_line(&out).contains("count=0 fixed=- unique=-"));
}

#[test]
fn falsify_without_a_file_audits_the_builtins() {
    let dir = TempDir::new().unwrap();
    let out = digifix(&["--window", "6", "falsify"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("both built-in counterexamples stand"), "{text}");
    assert_eq!(
        machine_line(&out),
        "digifix cmd=falsify mode=builtin ok=true window=6 ratio=2"
    );
}

#[test]
fn falsify_with_a_document_searches_and_reports_exhaustion() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "target.json",
        r#"{
          "dimension": 1,
          "points": [[0]],
          "adjacency": {"kind": "c_u", "u": 1},
          "metric": {"kind": "lp", "p": 1.0},
          "condition": {"variant": "banach", "coefficients": [0.5]}
        }"#,
    );
    let out = digifix(&["--budget", "3", "falsify", &doc], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("no counterexample"), "{text}");
    assert!(machine_line(&out).contains("mode=search found=false"));
}

#[test]
fn a_document_built_by_serde_round_trips_through_the_binary() {
    let dir = TempDir::new().unwrap();
    let value = serde_json::json!({
        "dimension": 2,
        "points": [[0, 0], [1, 0], [1, 1]],
        "adjacency": {"kind": "c_u", "u": 2},
        "metric": {"kind": "shortest_path"},
        "map": {"kind": "table", "pairs": [[0, 0], [1, 0], [2, 0]]},
        "condition": {"variant": "quasi", "coefficients": [0.4]}
    });
    let doc = write_doc(
        dir.path(),
        "roundtrip.json",
        &serde_json::to_string_pretty(&value).unwrap(),
    );
    let out = digifix(&["check", &doc], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(machine_line(&out).contains("holds=true"));
}
