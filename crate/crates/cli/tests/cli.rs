use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cdindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdindex"))
        .args(args)
        .env_remove("CDINDEX_MAX_N")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = cdindex(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn compute_example_interval() {
    let v = json(&["compute", "2134", "4321"]);
    assert_eq!(v["cd_index"]["2"], serde_json::json!({"cc": 2, "d": 1}));
    assert_eq!(v["cd_index"]["4"]["cccc"], 1);
    assert_eq!(v["cd_index"]["4"]["dd"], 1);
    assert_eq!(v["order"], "lex");
}

#[test]
fn compute_single_edge() {
    let v = json(&["compute", "1234", "2134"]);
    assert_eq!(v["cd_index"], serde_json::json!({"0": {"1": 1}}));
}

#[test]
fn all_orders_gives_identical_output() {
    let a = cdindex(&["compute", "2134", "4321"]);
    let b = cdindex(&["compute", "2134", "4321", "--all-orders"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn other_orders_agree() {
    let lex = json(&["compute", "1324", "4231"]);
    for order in ["rev", "word:1,2,1,3,2,1", "word:3,2,3,1,2,3"] {
        let other = json(&["compute", "1324", "4231", "--order", order]);
        assert_eq!(lex["cd_index"], other["cd_index"], "{order}");
    }
}

#[test]
fn tset_examples() {
    assert_eq!(strings(&json(&["tset", "2134", "4321", "d"])["t"]), ["436"]);
    assert_eq!(strings(&json(&["tset", "2134", "4321", "dd"])["t"]), ["41516"]);
    let cc = json(&["tset", "2134", "4321", "cc"]);
    assert_eq!(strings(&cc["t"]), ["235", "346"]);
    assert_eq!(cc["pairs"].as_array().unwrap().len(), 2);
}

#[test]
fn tset_pairs_d_with_its_accepted_flip() {
    let v = json(&["tset", "2134", "4321", "d"]);
    assert_eq!(v["pairs"], serde_json::json!([["436", "462"]]));
}

#[test]
fn tset_wrong_parity_is_empty() {
    let v = json(&["tset", "2134", "4321", "c"]);
    assert!(v["t"].as_array().unwrap().is_empty());
    assert!(v["t_bar"].as_array().unwrap().is_empty());
}

#[test]
fn tset_from_intermediate_vertex() {
    let v = json(&["tset", "2134", "4321", "c", "--from", "2143"]);
    assert_eq!(strings(&v["t"]).len(), 1);
}

#[test]
fn user_errors_exit_2() {
    assert_eq!(cdindex(&["compute", "4321", "2134"]).status.code(), Some(2));
    assert_eq!(cdindex(&["compute", "2134", "43x1"]).status.code(), Some(2));
    assert_eq!(cdindex(&["tset", "2134", "4321", "cx"]).status.code(), Some(2));
    assert_eq!(cdindex(&["compute", "2134", "4321", "--order", "word:1,1"]).status.code(), Some(2));
    assert_eq!(cdindex(&["dot", "2134", "1234"]).status.code(), Some(2));
    assert_eq!(cdindex(&["scan", "--n", "7"]).status.code(), Some(2));
    assert_eq!(cdindex(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn max_n_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_cdindex"))
        .args(["compute", "2134", "4321"])
        .env("CDINDEX_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_single_edge_and_determinism() {
    let out = cdindex(&["dot", "1234", "2134"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("->").count(), 1);
    let a = cdindex(&["dot", "2134", "4321"]).stdout;
    let b = cdindex(&["dot", "2134", "4321"]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    for rank in 1..=6 {
        assert!(text.contains(&format!("[label=\"{rank}\"]")), "{rank}");
    }
}

#[test]
fn dot_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let out = cdindex(&["dot", "2134", "4321", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&path).unwrap(), cdindex(&["dot", "2134", "4321"]).stdout);
}

#[test]
fn verify_example_interval() {
    let v = json(&["verify", "2134", "4321"]);
    let monomials = v["monomials"].as_array().unwrap();
    assert_eq!(monomials.len(), 8);
    assert!(monomials.iter().all(|m| m["flip"] == "holds" && m["consistent"] == true));
}

fn scan_lines(path: &std::path::Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn scan_s4_has_no_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s4.jsonl");
    let out = cdindex(&["scan", "--n", "4", "--max-length", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let records = scan_lines(&path);
    assert_eq!(records.len(), 213);
    for r in &records {
        for m in r["monomials"].as_array().unwrap() {
            assert_eq!(m["flip"], "holds");
            assert_eq!(m["consistent"], true);
        }
    }
}

#[test]
fn scan_s2_is_trivial() {
    let out = cdindex(&["scan", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 3);
    let top = records.iter().find(|r| r["length"] == 1).unwrap();
    assert_eq!(top["cd_index"], serde_json::json!({"0": {"1": 1}}));
}

#[test]
fn scan_resume_reproduces_full_run() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let part = dir.path().join("part.jsonl");
    let args = |p: &std::path::Path| {
        vec!["scan".to_string(), "--n".into(), "4".into(), "--out".into(), p.to_str().unwrap().into()]
    };
    let run = |p: &std::path::Path, resume: bool| {
        let mut a = args(p);
        if resume {
            a.push("--resume".into());
        }
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        cdindex(&a).status.code()
    };
    assert_eq!(run(&full, false), Some(0));
    let bytes = fs::read(&full).unwrap();
    // Cut in the middle of a line, as an interrupted run would.
    fs::write(&part, &bytes[..bytes.len() / 2 + 7]).unwrap();
    assert_eq!(run(&part, true), Some(0));
    assert_eq!(fs::read(&part).unwrap(), bytes);
    assert_eq!(run(&part, true), Some(0));
    assert_eq!(fs::read(&part).unwrap(), bytes);
}

#[test]
fn scan_resume_rejects_other_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.jsonl");
    let p = path.to_str().unwrap();
    assert_eq!(cdindex(&["scan", "--n", "3", "--out", p]).status.code(), Some(0));
    let out = cdindex(&["scan", "--n", "3", "--out", p, "--resume", "--order", "rev"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_to_unwritable_path_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.jsonl");
    let out = cdindex(&["scan", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}
