//! End-to-end runs of the `hahnfield` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_hahnfield"));
    command.args(args).env_remove("HAHNFIELD_SEED");
    for (key, value) in env {
        command.env(key, value);
    }
    command.output().expect("the binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn json(output: &Output) -> Value {
    serde_json::from_str(&stdout(output)).expect("stdout is JSON")
}

fn shifted_couple(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("couple.json");
    fs::write(
        &path,
        r#"{"chain":{"kind":"product","q":["q1","q2","q3"]},"offset":"-1@(q2,0)"}"#,
    )
    .unwrap();
    path
}

#[test]
fn realize_reports_the_requested_ranks() {
    let output = run(&["realize", "--q", "a,b,c", "--p", "b"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("principal differential rank: b < c"));
    assert!(text.contains("principal unfolded rank: a < b < c"));
    assert!(text.contains("cut class: (b,0)"));
}

#[test]
fn realize_json_carries_the_schema_and_labels() {
    let output = run(&["--json", "realize", "--q", "a,b", "--p", "b"]);
    assert!(output.status.success());
    let report = json(&output);
    assert_eq!(report["schema"], "hahnfield/1");
    assert_eq!(report["command"], "realize");
    assert_eq!(report["generator"], "b");
    assert_eq!(report["principalRankLabels"], serde_json::json!(["b"]));
    assert_eq!(report["principalUnfoldedLabels"], serde_json::json!(["a", "b"]));
    assert_eq!(report["trichotomy"]["class"], "gap");
    assert_eq!(report["couple"]["offset"], "-1@(b,0)");
}

#[test]
fn rank_reads_couple_files() {
    let dir = TempDir::new().unwrap();
    let path = shifted_couple(&dir);
    let output = run(&["--json", "rank", "--couple", path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let report = json(&output);
    assert_eq!(
        report["rank"]["segments"],
        serde_json::json!(["{q1:all,q2:all}", "full"])
    );
    assert_eq!(
        report["unfolded"]["segments"],
        serde_json::json!(["{q1:all}", "{q1:all,q2:all}", "full"])
    );
    assert_eq!(report["cut"]["cutClass"], "(q2,0)");
    assert!(report["contraction"].is_null());
}

#[test]
fn rank_reports_the_contraction_on_integrating_couples() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("free.json");
    fs::write(
        &path,
        r#"{"chain":{"kind":"product","q":["q1","q2"]},"offset":"0"}"#,
    )
    .unwrap();
    let output = run(&["--json", "rank", "--couple", path.to_str().unwrap()]);
    assert!(output.status.success());
    let report = json(&output);
    assert_eq!(report["contraction"]["matchesUnfolded"], true);
    assert_eq!(report["trichotomy"]["class"], "asymptoticIntegration");
}

#[test]
fn axioms_pass_and_honor_the_seed_resolution() {
    let dir = TempDir::new().unwrap();
    let path = shifted_couple(&dir);
    let path = path.to_str().unwrap();

    let from_env = run_with_env(&["--json", "axioms", "--couple", path], &[("HAHNFIELD_SEED", "7")]);
    assert!(from_env.status.success(), "{}", stderr(&from_env));
    let report = json(&from_env);
    assert_eq!(report["allPass"], true);
    assert_eq!(report["seed"], 7);

    let flag_wins = run_with_env(
        &["--json", "axioms", "--couple", path, "--seed", "9"],
        &[("HAHNFIELD_SEED", "7")],
    );
    assert_eq!(json(&flag_wins)["seed"], 9);

    let bad_env = run_with_env(&["axioms", "--couple", path], &[("HAHNFIELD_SEED", "abc")]);
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn derive_defaults_to_the_three_block_chain() {
    let output = run(&["derive", "--series", "3*t{2@(q1,0)} + -1/2*t{0}"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("D(-1/2*t{0} + 3*t{2@(q1,0)}) = -6*t{2@(q1,0) + -1@(q1,1)}"));
}

#[test]
fn qo_compares_classes() {
    let output = run(&["--json", "qo", "--a", "(q1,0)", "--b", "(q1,3)"]);
    assert!(output.status.success());
    let report = json(&output);
    assert_eq!(report["relation"], "equivalent");

    let output = run(&["--json", "qo", "--a", "(q1,0)", "--b", "(q2,5)"]);
    assert_eq!(json(&output)["relation"], "above");
}

#[test]
fn qo_accepts_chain_files_and_windows() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("chain.json");
    fs::write(&path, r#"{"kind":"finite","labels":["g1","g2"]}"#).unwrap();
    let output = run(&[
        "--json",
        "--window=-4,4",
        "qo",
        "--chain",
        path.to_str().unwrap(),
        "--a",
        "g1",
        "--b",
        "g2",
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let report = json(&output);
    assert_eq!(report["window"]["lo"], -4);
    // The shift runs off the top of a finite chain, so all of its classes
    // collapse into a single quasiorder bucket.
    assert_eq!(report["relation"], "equivalent");
}

#[test]
fn residue_classifies_segments() {
    let dir = TempDir::new().unwrap();
    let path = shifted_couple(&dir);
    let output = run(&[
        "--json",
        "residue",
        "--couple",
        path.to_str().unwrap(),
        "--segment",
        "{q1:all,q2:tail(-2)}",
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let report = json(&output);
    assert_eq!(report["class"], "residueDerivationOnly");
    assert_eq!(report["certificateAlignment"], true);
    assert!(report["residueWitness"].is_string());
}

#[test]
fn unusable_input_exits_two() {
    let bad_series = run(&["derive", "--series", "3*t{2@(zz,0)}"]);
    assert_eq!(bad_series.status.code(), Some(2));
    assert!(stderr(&bad_series).contains("unknown label"));

    let missing = run(&["rank", "--couple", "/no/such/file.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let path = shifted_couple(&dir);
    let bad_segment = run(&[
        "residue",
        "--couple",
        path.to_str().unwrap(),
        "--segment",
        "{q2:all}",
    ]);
    assert_eq!(bad_segment.status.code(), Some(2));
    assert!(stderr(&bad_segment).contains("final segment"));

    let empty_window = run(&["--window=3,1", "qo", "--a", "(q1,0)", "--b", "(q1,1)"]);
    assert_eq!(empty_window.status.code(), Some(2));

    let dup_labels = run(&["realize", "--q", "a,a"]);
    assert_eq!(dup_labels.status.code(), Some(2));
    assert!(stderr(&dup_labels).contains("more than once"));
}
