use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn snp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn betweenness_is_in_asnp() {
    let o = snp(&["check-asnp", &corpus("betweenness.snp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ASNP: yes"));
}

#[test]
fn three_cycle_is_not_acyclic() {
    let o = snp(&["eval", &corpus("acyclic.snp"), &corpus("cycle3.struct")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a model"));
}

#[test]
fn self_equivalence() {
    let a = corpus("acyclic.snp");
    let o = snp(&["equiv", &a, &a, "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_carry_location() {
    let dir = std::env::temp_dir().join("snp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.snp");
    std::fs::write(&bad, "exists T/2. forall x.\n  (T(x) -> false)\n").unwrap();
    let o = snp(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.snp:2:"), "{err}");
}

#[test]
fn caps_exit_with_three() {
    let o = snp(&["models", &corpus("acyclic.snp"), "--max-size", "12"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let o = snp(&["parse", &corpus("acyclic.snp"), "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn matchings_fail_in_strong_mode_only() {
    let f = corpus("matchings.struct");
    assert_eq!(snp(&["check-ap", &f, "--strong"]).status.code(), Some(1));
    assert_eq!(snp(&["check-ap", &f]).status.code(), Some(0));
}

#[test]
fn json_is_one_document() {
    for args in [
        vec!["classify", "acyclic.snp"],
        vec!["check-asnp", "three_colouring.snp"],
        vec!["check-ap", "cographs.struct"],
        vec!["split-gmsnp", "u_or_v.snp"],
        vec!["models", "oriented.snp"],
        vec!["closure", "u_or_v.snp"],
    ] {
        let mut full: Vec<String> = vec![args[0].to_string(), corpus(args[1])];
        full.extend(["--format".to_string(), "json".to_string()]);
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let o = snp(&refs);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v.is_object(), "{args:?}");
    }
}

#[test]
fn json_errors_are_documents_too() {
    let o = snp(&["split-gmsnp", &corpus("acyclic.snp"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("not guarded"));
}

#[test]
fn split_writes_numbered_files() {
    let dir = std::env::temp_dir().join("snp-cli-split");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("part.snp");
    let o = snp(&["split-gmsnp", &corpus("u_or_v.snp"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for i in 1..=2 {
        let text = std::fs::read_to_string(dir.join(format!("part_{i}.snp"))).unwrap();
        assert!(text.starts_with("exists"));
    }
}

#[test]
fn csp_output_is_in_asnp() {
    let dir = std::env::temp_dir().join("snp-cli-csp");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("order.snp");
    let o = snp(&["csp-to-asnp", &corpus("order.csp"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = snp(&["check-asnp", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn signature_file_declares_unused_symbols() {
    let o = snp(&["parse", &corpus("no_loops.snp"), "--sig", &corpus("graph.sig"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["input_signature"]["U"], 1);
}

#[test]
fn eval_witness_prints_expansion() {
    let o = snp(&["eval", &corpus("acyclic.snp"), &corpus("paths.struct"), "--witness"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("path3: model"));
    assert!(s.contains("path3_expansion"));
}
