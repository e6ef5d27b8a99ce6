use std::io::Write;
use std::process::{Command, Output};

use necklace_core::enumerate_codes;
use serde_json::{json, Value};

fn necklace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_necklace")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = necklace(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn status(args: &[&str]) -> i32 {
    necklace(args).status.code().unwrap()
}

fn map_file(pairs: &[(Vec<u32>, Vec<u32>)]) -> tempfile::NamedTempFile {
    let body: Vec<Value> = pairs.iter().map(|(a, b)| json!({"from": a, "to": b})).collect();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(serde_json::to_string(&body).unwrap().as_bytes()).unwrap();
    file
}

/// Rotation by `steps` to the left, written out by hand.
fn rotated(e: &[u32], steps: usize) -> Vec<u32> {
    (0..e.len()).map(|j| e[(j + steps) % e.len()]).collect()
}

#[test]
fn slime_chain() {
    assert_eq!(stdout(&["migrate", "1,1,2,1,0,1,0,3,0,0,2"]), "2,1,1,2,0,1,0,2,1,0,1");
    assert_eq!(stdout(&["migrate", "--steps", "2", "1,1,2,1,0,1,0,3,0,0,2"]), "1,2,0,3,0,1,0,1,2,0,1");
    assert_eq!(stdout(&["migrate", "--backward", "2,1,1,2,0,1,0,2,1,0,1"]), "1,1,2,1,0,1,0,3,0,0,2");

    let v: Value = serde_json::from_str(&stdout(&["slimes", "1,1,2,1,0,1,0,3,0,0,2"])).unwrap();
    assert_eq!(v["m"], 3);
    assert_eq!(v["valid"], true);
    assert_eq!(v["weight"], 3);
    assert_eq!(v["slimes"].as_array().unwrap().len(), 3);

    let text = stdout(&["--format", "text", "slimes", "2,2,2"]);
    assert!(text.contains("valid=false"), "{text}");
}

#[test]
fn scalar_commands() {
    assert_eq!(stdout(&["ws", "4,2,1"]), "1");
    assert_eq!(stdout(&["ws", "1,4,2"]), "2");
    assert_eq!(stdout(&["rotate", "--steps", "1", "4,2,1"]), "2,1,4");
    assert_eq!(stdout(&["rotate", "--steps", "-1", "4,2,1"]), "1,4,2");
    assert_eq!(stdout(&["phi", "3,0,0"]), "2,1,0");
    assert_eq!(stdout(&["phi", "--inverse", "2,1,0"]), "3,0,0");
    assert_eq!(stdout(&["period", "1,2,1,2"]), "2");
    assert_eq!(stdout(&["canon", "1,0,2"]), "0,2,1");
}

#[test]
fn word_round_trip() {
    assert_eq!(stdout(&["word", "4,2,1"]), "BWWWWBWWBW");
    assert_eq!(stdout(&["unword", "BWWWWBWWBW"]), "4,2,1");
    assert_eq!(stdout(&["unword", "WBWWBW"]), "2,2");
}

#[test]
fn enumeration_and_counting() {
    let lines = stdout(&["enum", "codes", "3", "3"]);
    assert_eq!(lines.lines().count(), 10);
    let lines = stdout(&["enum", "codes", "3", "3", "--t", "0"]);
    assert_eq!(lines.lines().count(), 4);
    let lines = stdout(&["enum", "necklaces", "5", "10"]);
    assert_eq!(lines.lines().count(), 201);
    assert_eq!(stdout(&["count", "3", "3"]), "formula=4 enumerated=4");
    let v: Value = serde_json::from_str(&stdout(&["--format", "json", "count", "5", "10"])).unwrap();
    assert_eq!(v["agree"], true);
}

#[test]
fn bijection_outputs() {
    let v: Value = serde_json::from_str(&stdout(&["bijection", "2", "4"])).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);

    let csv = stdout(&["--format", "csv", "bijection", "3", "3"]);
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("code,necklace,word"));
    assert_eq!(rows.count(), 4);

    let lexmax: Value =
        serde_json::from_str(&stdout(&["bijection", "3", "3", "--chooser", "lexmax"])).unwrap();
    assert_eq!(lexmax["chooser"], "lexmax");
}

#[test]
fn composite_length_needs_a_map() {
    let out = necklace(&["bijection", "4", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("riwi-map"));
}

#[test]
fn exit_codes() {
    assert_eq!(status(&["ws", "1,x"]), 2);
    assert_eq!(status(&["ws", "1,-2"]), 2);
    assert_eq!(status(&["migrate", "2,2,2"]), 1);
    assert_eq!(status(&["verify", "3", "3", "--check", "no_such_check"]), 2);
    assert_eq!(status(&["verify", "4", "3", "--check", "lemma_oddinv"]), 1);
    assert_eq!(status(&["verify", "5", "10"]), 0);
    assert_eq!(status(&["no-such-command"]), 2);
}

#[test]
fn verify_writes_certificates() {
    let out = stdout(&["verify", "5", "4"]);
    for line in out.lines() {
        let c: Value = serde_json::from_str(line).unwrap();
        assert_eq!(c["verdict"], "pass", "{line}");
        assert_eq!((c["n"].as_u64(), c["k"].as_u64()), (Some(5), Some(4)));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certs.jsonl");
    stdout(&["verify", "3", "3", "--out", path.to_str().unwrap()]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.lines().count() >= 3);
}

#[test]
fn custom_riwi_maps() {
    // on F'(3,4), rotating by two raises the weighted sum by one
    let pairs: Vec<_> = enumerate_codes(3, 4, None, true)
        .map(|f| (f.entries().to_vec(), rotated(f.entries(), 2)))
        .collect();
    let good = map_file(&pairs);
    let path = good.path().to_str().unwrap();
    let report: Value = serde_json::from_str(&stdout(&["verify-riwi", "--map", path, "3", "4"])).unwrap();
    assert_eq!(report["passed"], true);

    let table: Value = serde_json::from_str(&stdout(&["bijection", "3", "4", "--map", path])).unwrap();
    assert_eq!(table["pairs"].as_array().unwrap().len(), 5);
    assert!(table["riwi"].as_str().unwrap().starts_with("custom:"));

    let identity: Vec<_> = pairs.iter().map(|(a, _)| (a.clone(), a.clone())).collect();
    let bad = map_file(&identity);
    let out = necklace(&["verify-riwi", "--map", bad.path().to_str().unwrap(), "3", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert!(!report["counterexamples"].as_array().unwrap().is_empty());

    let mut junk = tempfile::NamedTempFile::new().unwrap();
    junk.write_all(b"not json").unwrap();
    assert_eq!(status(&["verify-riwi", "--map", junk.path().to_str().unwrap(), "3", "4"]), 2);
}
