use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use rsl_cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn args(line: &str) -> Vec<String> {
    line.split_whitespace().map(|s| s.replace("@", &fixture(""))).collect()
}

fn report(line: &str) -> (i32, Value) {
    let (code, text) = run(&args(line), None);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{line}: {e}: {text}")))
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn subtree_counts() {
    let (code, r) = report("subtrees --space r1 --n 1");
    assert_eq!(code, 0);
    assert_eq!(r["data"]["count"], 5);
    let (code, r) = report("subtrees --space r1 --n 0");
    assert_eq!(code, 0);
    assert_eq!(r["data"]["count"], 3);
    let (code, r) = report("subtrees --space h2 --n 1");
    assert_eq!(code, 0);
    assert_eq!(r["data"]["count"], 2 + 2 * 3 + 9);
}

#[test]
fn ellentuck_axioms_pass() {
    let (code, r) = report("axioms --space ellentuck --depth 4");
    assert_eq!(code, 0);
    assert_eq!(r["summary"], "PASS");
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["status"] == "PASS"));
}

#[test]
fn tree_axioms_never_fail() {
    for line in ["axioms --space r1 --depth 3", "axioms --space h2 --depth 2"] {
        let (code, r) = report(line);
        assert_eq!(code, 0, "{r}");
        assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["status"] != "FAIL"));
    }
}

#[test]
fn pentagon_is_indeterminate() {
    let (code, r) = report("homogenize --ground 5 --colors 2 --target 3 --coloring @pentagon.json");
    assert_eq!(code, 3);
    assert_eq!(r["summary"], "INDETERMINATE");
    let (code, r) = report("homogenize --ground 5 --colors 2 --target 2 --coloring @pentagon.json");
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"][0]["witness"]["set"], serde_json::json!([0, 1]));
}

#[test]
fn arrow_failure_exits_one() {
    let (code, r) = report("graphs --arrow @c5.json 3 3");
    assert_eq!(code, 1);
    assert_eq!(r["summary"], "FAIL");
    let (code, _) = report("graphs --arrow @c5.json 2 3");
    assert_eq!(code, 0);
}

#[test]
fn canonize_modes() {
    let (code, r) = report("canonize --er 2 --input @er_min.json --target 4");
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"][0]["witness"]["indices"], serde_json::json!([0]));
    let (code, r) = report("canonize --pr --input @pr_schreier.json --target 4");
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"][1]["status"], "PASS");
    let (code, r) = report("canonize --graph --input @graph_square.json");
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"][0]["witness"]["indices"], serde_json::json!([0, 1]));
}

#[test]
fn ideal_and_fubini() {
    let (code, r) = report("ideal --input @upper_triangle.json --paper-positive");
    assert_eq!(code, 0);
    assert_eq!(r["data"]["in_fin_tensor"], false);
    assert_eq!(r["data"]["paper_positive"], true);
    let (code, r) = report("fubini --set @upper_triangle.json --u cofinite --v cofinite");
    assert_eq!(code, 0);
    assert_eq!(r["data"]["member"], true);
    let (_, r) = report("fubini --set @row5_removed.json --u principal:5 --v cofinite;5=cofinite");
    assert_eq!(r["data"]["member"], false);
}

#[test]
fn usage_errors_exit_two() {
    for line in [
        "",
        "nonsense",
        "barrier --ground 5",
        "barrier --uniform 2 --schreier --ground 5",
        "canonize --er 2 --input @er_min.json",
        "subtrees --space ellentuck --n 1",
        "subtrees --space r1 --n 40",
        "axioms --space h2 --depth 9",
        "homogenize --ground 6 --colors 2 --target 3 --coloring @pentagon.json",
        "homogenize --ground 5 --colors 2 --target 3 --coloring @missing.json",
        "fubini --set @upper_triangle.json --u nonprincipal --v cofinite",
        "ideal --input @pentagon.json",
    ] {
        let (code, text) = run(&args(line), None);
        assert_eq!(code, 2, "{line}: {text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!(v["error"].is_string(), "{line}");
    }
}

#[test]
fn colorings_must_be_total_and_in_range() {
    let partial = temp_json(r#"{"0,1": 0}"#);
    let line = format!("homogenize --ground 3 --colors 2 --target 2 --coloring {}", partial.path().display());
    assert_eq!(run(&args(&line), None).0, 2);
    let wide = temp_json(r#"{"0,1": 0, "0,2": 5, "1,2": 1}"#);
    let line = format!("homogenize --ground 3 --colors 2 --target 2 --coloring {}", wide.path().display());
    assert_eq!(run(&args(&line), None).0, 2);
    let extra = temp_json(r#"{"0,1": 0, "0,2": 1, "1,2": 1, "0,3": 1}"#);
    let line = format!("homogenize --ground 3 --colors 2 --target 2 --coloring {}", extra.path().display());
    assert_eq!(run(&args(&line), None).0, 2);
}

#[test]
fn budget_override() {
    let a = args("homogenize --ground 5 --colors 2 --target 3 --coloring @pentagon.json");
    let (_, text) = run(&a, Some("7"));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["parameters"]["budget"], 7);
    assert_eq!(run(&a, Some("lots")).0, 2);
    assert_eq!(run(&a, Some("0")).0, 2);
}

#[test]
fn timing_is_opt_in() {
    let (_, plain) = report("subtrees --space r1 --n 2");
    assert!(plain.get("timing").is_none());
    let (_, timed) = report("subtrees --space r1 --n 2 --timing");
    assert!(timed["timing"]["elapsed_ms"].is_number());
}

#[test]
fn pretty_output_parses_the_same() {
    let (_, compact) = run(&args("graphs --enumerate 3 3"), None);
    let (_, pretty) = run(&args("graphs --enumerate 3 3 --pretty"), None);
    assert_ne!(compact, pretty);
    let a: Value = serde_json::from_str(&compact).unwrap();
    let mut b: Value = serde_json::from_str(&pretty).unwrap();
    b["command"] = a["command"].clone();
    assert_eq!(a, b);
}

#[test]
fn binary_matches_library() {
    let line = args("subtrees --space h2 --n 0");
    let out = Command::new(env!("CARGO_BIN_EXE_rsl")).args(&line).env_remove("RSL_BUDGET").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(&line, None).1);
    let out = Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(args("homogenize --ground 5 --colors 2 --target 3 --coloring @pentagon.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_rsl")).arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
