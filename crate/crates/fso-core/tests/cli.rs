//! End-to-end checks of the `fso` binary: exit codes, artifact contents,
//! and the no-partial-artifacts contract.

use std::path::Path;
use std::process::{Command, Output};

fn fso(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fso"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn fso")
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

#[test]
fn develop_writes_dump_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = fso(
        &[
            "develop",
            "011123334",
            "--svg",
            "fig.svg",
            "--out",
            "dump.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dump: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("dump.json")).unwrap())
            .unwrap();
    assert_eq!(dump["node_count"], 128);
    assert_eq!(dump["schema_version"], 1);
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 128);
}

#[test]
fn develop_rejects_bad_input_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = fso(&["develop", ""], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));

    let out = fso(&["develop", "01x"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn develop_budget_exit_3_and_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let out = fso(&["develop", "011123334", "--budget", "50"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    let out = Command::new(env!("CARGO_BIN_EXE_fso"))
        .args(["develop", "011123334"])
        .env("FSO_SIM_BUDGET", "50")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn modularity_exit_codes_follow_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let ok = fso(&["modularity", "011123334", "011112233334"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(body["nodes_covered"], 128);

    let reflexive = fso(&["modularity", "0112", "0112"], dir.path());
    assert_eq!(reflexive.status.code(), Some(0));

    let failed = fso(&["modularity", "05", "011123334"], dir.path());
    assert_eq!(failed.status.code(), Some(1));

    let invalid = fso(&["modularity", "0x", "01"], dir.path());
    assert_eq!(invalid.status.code(), Some(2));
}

#[test]
fn walk_zero_steps_yields_single_line_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "walk.json",
        r#"{"seed": "01", "steps": 0, "laziness": 0.5, "rng_seed": 1, "burn_in": 0}"#,
    );
    let out = fso(
        &["walk", "--config", "walk.json", "--format", "jsonl"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec!["[0,0]"]);
}

#[test]
fn walk_without_rng_seed_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "walk.json",
        r#"{"seed": "01", "steps": 10, "laziness": 0.5}"#,
    );
    let out = fso(&["walk", "--config", "walk.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rng_seed"));

    // the flag satisfies the requirement
    let out = fso(
        &["walk", "--config", "walk.json", "--rng-seed", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn canon_trace_matches_the_three_level_story() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "canon.json",
        r#"{
            "levels": [
                [{"id": "top", "capabilities": ["c"]}],
                [{"id": "mid", "capabilities": ["b"]}],
                [{"id": "bot1", "capabilities": ["a"]}, {"id": "bot2", "capabilities": ["d"]}]
            ],
            "events": [
                {"id": 1, "focal_level": 2, "required_roles": ["a", "b"],
                 "arrival_tick": 0, "service_ticks": 5}
            ]
        }"#,
    );
    let out = fso(&["canon", "--config", "canon.json"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2); // one record + aggregate
    let record: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(record["team"]["levels_visited"], serde_json::json!([2, 1]));
    assert_eq!(record["team"]["outcome"]["kind"], "complete");
    let aggregate: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(aggregate["completion_rate"], 1.0);
}

#[test]
fn channel_on_perfect_link_reports_full_delivery() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "channel.json",
        r#"{
            "messages": 100,
            "rng_seed": 1,
            "channels": [{"name": "clean", "kind": "constant", "p": 0.0}],
            "strategies": [{"name": "adapt", "kind": "entelechic", "epsilon": 0.05}]
        }"#,
    );
    let out = fso(&["channel", "--config", "channel.json"], dir.path());
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["rows"][0]["report"]["delivery_rate"], 1.0);
}

#[test]
fn unsupported_formats_are_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "walk.json",
        r#"{"seed": "01", "steps": 5, "laziness": 0.5, "rng_seed": 1}"#,
    );
    let out = fso(
        &["walk", "--config", "walk.json", "--format", "csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_runs_leave_no_partial_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    // config is invalid (no rng_seed): the output file must not appear
    write(
        dir.path(),
        "walk.json",
        r#"{"seed": "01", "steps": 10, "laziness": 0.5}"#,
    );
    let out = fso(
        &["walk", "--config", "walk.json", "--out", "missing.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("missing.json").exists());

    // an existing artifact survives a failed rerun untouched
    write(dir.path(), "keep.json", "precious bytes");
    let out = fso(
        &["walk", "--config", "walk.json", "--out", "keep.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("keep.json")).unwrap(),
        "precious bytes"
    );
}

#[test]
fn every_subcommand_documents_its_schema_version() {
    let dir = tempfile::tempdir().unwrap();
    let help = fso(&["--help"], dir.path());
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("schema version 1"));
    for sub in ["develop", "modularity", "walk", "canon", "channel", "sort"] {
        let out = fso(&[sub, "--help"], dir.path());
        assert!(out.status.success(), "{sub} --help failed");
        let text = String::from_utf8_lossy(&out.stdout).to_lowercase();
        assert!(
            text.contains("schema version 1") || text.contains("schema version: 1"),
            "{sub} --help does not mention the schema version"
        );
    }
}

#[test]
fn sort_reports_scores_and_reasons() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sort.json",
        r#"{
            "monads": [
                {"id": "m1", "genotype": "01", "intrinsic_quality": 5.0, "conflicts": ["m2"]},
                {"id": "m2", "genotype": "01", "intrinsic_quality": 3.0, "conflicts": ["m1"]},
                {"id": "m3", "genotype": "0", "intrinsic_quality": 2.0}
            ],
            "environment": {"capacity": 2},
            "include_oracle": true
        }"#,
    );
    let out = fso(&["sort", "--config", "sort.json"], dir.path());
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["selected"], serde_json::json!(["m1", "m3"]));
    assert_eq!(body["decisions"][1]["decision"], "rejected_conflict");
    assert_eq!(body["oracle"]["selected"], serde_json::json!(["m1", "m3"]));
}
