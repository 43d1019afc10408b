use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dp1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp1")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn dp1_lines() {
    let o = dp1(&["verify-lemma", "DP1lines"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "240 curves; families 8/28/56/56/56/28/8; OK");
}

#[test]
fn every_lemma_passes() {
    for lemma in [
        "A2A22",
        "Davidinv",
        "Davidintersection",
        "2Daviddef",
        "Davidauto",
        "Davidmin",
        "Davidmin1",
        "Davidmin2",
        "RatCor-consistency",
    ] {
        let o = dp1(&["verify-lemma", lemma]);
        assert!(o.status.success(), "{lemma}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).trim_end().ends_with("; OK"), "{lemma}");
    }
}

#[test]
fn lemma_json() {
    let o = dp1(&["verify-lemma", "Davidmin", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lemma"], "Davidmin");
    assert_eq!(v["ok"], true);
    assert!(v["counterexample"].is_null());
}

#[test]
fn classify_inline_permutation() {
    let o = dp1(&["classify-element", "-e", "(1 2 3)(4 5 6)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "order 3, rank 5, type A2^2");
    let o = dp1(&["classify-element", "-e", "(1 2)", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 2);
    assert_eq!(v["fixed_rank"], 8);
    assert!(v["carter_type"].is_null());
}

#[test]
fn census_from_matrix_file() {
    let matrix = stdout(&dp1(&["classify-element", "-e", "rep A2x4", "--json"]));
    assert!(matrix.contains("A2^4"));
    // write the representative as a matrix file via the report witness
    let report = dp1(&["report", "--gamma", "rep A2x4"]);
    let v: Value = serde_json::from_slice(&report.stdout).unwrap();
    let rows = v["witness"]["elements"][0].as_array().unwrap();
    let text: String = rows
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    let path = scratch("a2x4.txt", &format!("# A2^4 representative\n{text}"));
    let o = dp1(&["census", "-e", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "invariant curves: 0; faithful stars: 40");
}

#[test]
fn report_schema() {
    let gamma = scratch("gamma.txt", "# Galois image\nrep A2x3\n");
    let o = dp1(&["report", "-gamma", gamma.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "NotRational");
    assert_eq!(v["rule"], "not-rational-carter");
    for key in ["elements", "curves", "stars"] {
        assert!(v["witness"][key].is_array(), "{key}");
    }
    assert_eq!(v["ranks"]["G"], 9);
    assert_eq!(v["ranks"]["Gamma"], 3);
    assert_eq!(v["ranks"]["combined"], 3);

    let o = dp1(&["report"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "Rational");
    assert_eq!(v["witness"]["stars"].as_array().unwrap().len(), 2);
}

#[test]
fn report_with_group_list() {
    let g = scratch("g.txt", "(1 2 3)\n(4 5 6)\n");
    let o = dp1(&["report", "-g", g.to_str().unwrap(), "--gamma", "(7 8)"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ranks"]["G"], 5);
    assert_eq!(v["ranks"]["Gamma"], 8);
}

#[test]
fn listings() {
    let curves = stdout(&dp1(&["list-curves"]));
    assert_eq!(curves.lines().count(), 240);
    let stars = stdout(&dp1(&["list-stars"]));
    assert_eq!(stars.lines().next().unwrap(), "1120 stars");
    assert_eq!(stars.lines().count(), 1121);
    let roots: Value = serde_json::from_slice(&dp1(&["list-roots", "--json"]).stdout).unwrap();
    assert_eq!(roots.as_array().unwrap().len(), 240);
}

#[test]
fn output_is_stable() {
    let a = dp1(&["census", "-e", "(1 2 3)"]);
    let b = dp1(&["census", "-e", "(1 2 3)"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("invariant curves: 72; faithful stars: 1\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(dp1(&["classify-element", "-e", "(1 2"]).status.code(), Some(2));
    assert_eq!(dp1(&["classify-element", "-e", "(1 9)"]).status.code(), Some(2));
    assert_eq!(dp1(&["verify-lemma", "NoSuchLemma"]).status.code(), Some(2));
    assert_eq!(dp1(&["frobnicate"]).status.code(), Some(2));
    // non-commuting groups are rejected
    assert_eq!(dp1(&["report", "-g", "(1 2)", "--gamma", "(2 3)"]).status.code(), Some(2));
    // closure larger than the cap
    let big = dp1(&["report", "--gamma", "(1 2); (1 2 3 4 5 6 7 8)", "--cap", "50"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&big.stderr).contains("50"));
}
