use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsc")).args(args).output().expect("bsc runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn demazure_of_a_product() {
    let out = bsc(&["demazure", "--cartan", "A2", "--s", "1", "--poly", "a1*a2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), Value::String("a1+2*a2".into()));
}

#[test]
fn malformed_input_exits_with_two() {
    let out = bsc(&["eval", "--diagram", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    for args in [
        &["demazure", "--cartan", "A9", "--s", "1", "--poly", "a1"][..],
        &["demazure", "--cartan", "A2", "--s", "3", "--poly", "a1"],
        &["demazure", "--cartan", "A2", "--s", "1", "--poly", "a1*"],
        &["gen", "--cartan", "A2", "--gen", "merge", "--seq", "1,2", "--strand", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(bsc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["gen", "--cartan", "B2", "--gen", "vertex", "--seq", "1,2,1,2", "--strand", "1"];
    let first = bsc(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, bsc(&args).stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vertex.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = bsc(&with_out);
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn vertex_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["vertex", "--cartan", "A2", "--s", "1", "--t", "2", "--cache", cache];
    let first = bsc(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    assert_eq!(bsc(&args).stdout, first.stdout);
    let report = &json(&first)["report"];
    assert_eq!(report["dimension"], 1);
    assert_eq!(report["m"], 3);
}

#[test]
fn relation_checks_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    };
    let dot_merge = write(
        "dot_merge.json",
        r#"{"cartan": "A2", "bottom": ["1"], "slices": [{"gen": "dot_bot", "strand": 1, "color": "1"}, {"gen": "merge", "strand": 1}]}"#,
    );
    let identity = write("identity.json", r#"{"cartan": "A2", "bottom": ["1"], "slices": []}"#);
    let split_merge = write(
        "split_merge.json",
        r#"{"cartan": "A2", "bottom": ["1"], "slices": [{"gen": "split", "strand": 1}, {"gen": "merge", "strand": 1}]}"#,
    );

    let out = bsc(&["eval", "--diagram", &dot_merge, "--against", &identity]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equal"], true);

    let out = bsc(&["eval", "--diagram", &split_merge, "--against", &identity]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["equal"], false);

    let out = bsc(&["eval", "--diagram", &split_merge]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["entries"], serde_json::json!({}));
}

#[test]
fn element_commands_round_trip() {
    let out = bsc(&["normalize", "--cartan", "A2", "--seq", "1", "--tensor", r#"["1", "a2"]"#]);
    assert_eq!(json(&out)["coeffs"], serde_json::json!({"0": "1/2*a1+a2", "1": "-1"}));

    let b1 = r#"{"seq": [1], "coeffs": {"1": "1"}}"#;
    let out = bsc(&["localize", "--cartan", "A2", "--element", b1, "--gallery", "1"]);
    assert_eq!(json(&out)["1"]["value"], "-1/2*a1");

    let out = bsc(&["concat", "--cartan", "A2", "--left", b1, "--right", b1]);
    assert_eq!(json(&out)["coeffs"], serde_json::json!({"11": "1"}));
}

#[test]
fn localization_matrix_respects_the_size_bound() {
    let run = |bound: &str| {
        Command::new(env!("CARGO_BIN_EXE_bsc"))
            .args(["localize", "--cartan", "A2", "--matrix", "1,2,1"])
            .env("BSC_MAX_SEQ", bound)
            .output()
            .unwrap()
    };
    let ok = run("6");
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["full_rank"], true);
    assert_eq!(run("2").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn cartan_summary() {
    let out = json(&bsc(&["cartan", "--cartan", "[[2,-1],[-2,2]]"]));
    assert_eq!(out["braid_orders"][0]["m"], 4);
    assert_eq!(out["labels"], serde_json::json!(["1", "2"]));
}

#[test]
fn onecolor_suite_passes_on_a2() {
    let out = bsc(&["check", "--suite", "onecolor", "--cartan", "A2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn all_suites_pass_on_g2() {
    let out = bsc(&["check", "--suite", "all", "--cartan", "G2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
