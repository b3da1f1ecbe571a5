use std::fs;
use std::process::{Command, Output};

fn deltacert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltacert"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn certify_writes_reports_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    let out = deltacert(&["certify", "--n", "2..4", "--jobs", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 3);
    let md = fs::read_to_string(path.with_extension("md")).unwrap();
    assert!(md.contains("3 of 3 values of n certified"));

    let rendered = deltacert(&["report", path.to_str().unwrap()]);
    assert_eq!(rendered.status.code(), Some(0));
    assert_eq!(stdout(&rendered), md);
}

#[test]
fn certify_rejects_bad_ranges() {
    for args in [
        ["certify", "--n", "1"],
        ["certify", "--n", "5..3"],
        ["certify", "--n", "2..x"],
    ] {
        assert_eq!(deltacert(&args).status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_deltacert"))
        .args(["certify", "--n", "2..30"])
        .env("DELTACERT_MAX_N", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn large_epsilon_is_uncertified() {
    let out = deltacert(&["certify", "--n", "2", "--epsilon", "1/4", "--format", "md"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ledger a:"));
}

#[test]
fn link_labels_and_edge_cases() {
    let out = deltacert(&["link", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("2M∞ # 5 M₂"));

    let json = deltacert(&["link", "--n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["smale"]["b2"], 2);
    assert_eq!(v["genus"], 3);

    let one = deltacert(&["link", "--n", "1"]);
    assert_eq!(one.status.code(), Some(0));
    assert!(stderr(&one).contains("note:"));
    assert_eq!(deltacert(&["link", "--n", "0"]).status.code(), Some(2));
    assert_eq!(deltacert(&["link", "--n", "-3"]).status.code(), Some(2));
}

#[test]
fn surface_export_round_trips_and_reports_field_paths() {
    let dir = tempfile::tempdir().unwrap();
    let export = deltacert(&["surface", "--sn", "3", "--model", "enlarged", "--export"]);
    assert_eq!(export.status.code(), Some(0));
    let good = dir.path().join("s3.json");
    fs::write(&good, &export.stdout).unwrap();

    let from_file = deltacert(&["surface", good.to_str().unwrap(), "--flag", "R:p_R"]);
    let builtin = deltacert(&["surface", "--sn", "3", "--model", "enlarged", "--flag", "R:p_R"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&builtin));
    assert!(stdout(&builtin).contains("| R | 3/4 |"));

    let mut v: serde_json::Value = serde_json::from_slice(&export.stdout).unwrap();
    v["gram"][1][2] = serde_json::json!(7);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, v.to_string()).unwrap();
    let out = deltacert(&["surface", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("gram[1][2]"), "{}", stderr(&out));
}
