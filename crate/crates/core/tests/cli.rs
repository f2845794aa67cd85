use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mdsx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdsx")).args(args).output().expect("run mdsx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build_flagship(dir: &Path) -> std::path::PathBuf {
    let code = dir.join("code.json");
    let out = mdsx(&["build", "--n", "8", "--k", "5", "--delta", "2", "--out", s(&code)]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("q=17 tau=4 N=16 d=6"));
    code
}

#[test]
fn build_reports_parameters_and_rejects_bad_delta() {
    let dir = tempfile::tempdir().unwrap();
    let out = mdsx(&["build", "--n", "6", "--k", "3", "--delta", "3", "--out", s(&dir.path().join("c.json"))]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("q=17 tau=3 N=27"));

    let out = mdsx(&["build", "--n", "8", "--k", "5", "--delta", "4", "--out", s(&dir.path().join("x.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r = 3"));
    assert!(!dir.path().join("x.json").exists());

    assert_eq!(mdsx(&["build", "--n", "8"]).status.code(), Some(1));
}

#[test]
fn verify_passes_then_fails_on_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_flagship(dir.path());
    let out = mdsx(&["verify", "--code", s(&code)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "PASS (56 MDS subsets, 56 repair systems)");

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&code).unwrap()).unwrap();
    // zero the block of PCG 1, node 2
    for row in doc["blocks"][1][2].as_array_mut().unwrap() {
        for v in row.as_array_mut().unwrap() {
            *v = Value::from(0);
        }
    }
    let bad = dir.path().join("bad.json");
    fs::write(&bad, doc.to_string()).unwrap();
    let out = mdsx(&["verify", "--code", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.starts_with("FAIL: nodes ["), "{text}");
    assert!(text.contains('2'));
}

#[test]
fn audit_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_flagship(dir.path());
    let out = mdsx(&["audit", "--code", s(&code), "--paper-indexing"]);
    let text = stdout(&out);
    let node1: Vec<&str> = text.lines().nth(2).unwrap().split_whitespace().collect();
    assert_eq!(node1[3], "{1,3,5,7,9,11,13,15}");
    assert_eq!(node1[4], "{2,4,6,8,10,12,14,16}");

    let out = mdsx(&["audit", "--code", s(&code), "--json"]);
    let lines: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[3]["accessed"], serde_json::json!([2, 3, 6, 7, 10, 11, 14, 15]));
    assert_eq!(lines[3]["optimal"], Value::Bool(true));
    assert_eq!(lines[3]["total"], 48);
}

#[test]
fn cluster_lifecycle_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_flagship(dir.path());
    let input = dir.path().join("in.bin");
    let data: Vec<u8> = (0..5000u32).map(|i| (i * 31 % 256) as u8).collect();
    fs::write(&input, &data).unwrap();
    let cluster = dir.path().join("cluster");
    let c = s(&cluster);
    assert!(mdsx(&["ingest", "--code", s(&code), "--input", s(&input), "--cluster", c]).status.success());

    // healthy node needs --force
    assert_eq!(mdsx(&["repair", "--cluster", c, "--node", "3"]).status.code(), Some(1));
    assert!(mdsx(&["repair", "--cluster", c, "--node", "3", "--force"]).status.success());

    assert!(mdsx(&["kill", "--cluster", c, "--node", "3"]).status.success());
    assert_eq!(mdsx(&["kill", "--cluster", c, "--node", "3"]).status.code(), Some(1));

    // k helpers are not enough
    let out = mdsx(&["repair", "--cluster", c, "--node", "3", "--helpers", "0,1,2,4,5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("survivors"));

    let out = mdsx(&["repair", "--cluster", c, "--node", "3", "--helpers", "0,1,2,4,5,6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let stripes = (5000usize * 2).div_ceil(80);
    assert!(text.contains(&format!("stripes: {stripes}\n")), "{text}");
    assert!(text.contains(&format!("downloaded symbols: {}\n", stripes * 48)));
    assert!(text.contains(&format!("downloaded bytes: {}\n", stripes * 8 * 4 * 6)));

    let out_file = dir.path().join("out.bin");
    let out = mdsx(&["reassemble", "--cluster", c, "--out", s(&out_file), "--nodes", "0,2,4,6,7"]);
    assert!(out.status.success());
    assert_eq!(fs::read(&out_file).unwrap(), data);

    for n in [0, 1, 2, 3] {
        mdsx(&["kill", "--cluster", c, "--node", &n.to_string()]);
    }
    let out = mdsx(&["reassemble", "--cluster", c, "--out", s(&out_file)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn empty_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_flagship(dir.path());
    let input = dir.path().join("empty");
    fs::write(&input, b"").unwrap();
    let c = dir.path().join("cl");
    assert!(mdsx(&["ingest", "--code", s(&code), "--input", s(&input), "--cluster", s(&c)]).status.success());
    assert!(mdsx(&["kill", "--cluster", s(&c), "--node", "0"]).status.success());
    assert!(mdsx(&["repair", "--cluster", s(&c), "--node", "0"]).status.success());
    let out = dir.path().join("out");
    assert!(mdsx(&["reassemble", "--cluster", s(&c), "--out", s(&out)]).status.success());
    assert!(fs::read(&out).unwrap().is_empty());
}
