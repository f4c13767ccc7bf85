use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn monadkit(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monadkit"))
        .args(args)
        .env("MONADKIT_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn instance(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn verify_section3_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = monadkit(&["verify", "--family", "section3", "--copies", "1,1", "--k", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("composite zero: true"));
    let path = dir.path().join("monad-report-section3-1x3-k1.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["kind"], "monad-report");
    assert_eq!(doc["report"]["verdict"], "valid");
    assert_eq!(doc["seed"], 0);
}

#[test]
fn cohom_prints_a_single_number() {
    let dir = tempfile::tempdir().unwrap();
    let o = monadkit(&["cohom", "--space", "1,3", "--degree", "-2,0", "--p", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let all = monadkit(&["cohom", "--space", "1,1", "--degree", "1,1", "--degree", "-2,0"], dir.path());
    assert_eq!(stdout(&all), "h^0 = 4\nh^1 = 1\nh^2 = 0\n");
}

#[test]
fn stability_counterexample_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let spec = instance("o11-middle-counterexample.json");
    let o = monadkit(&["certify-stability", "--spec", &spec], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness B = (-1,-1)"), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: FAIL"));
}

#[test]
fn gap_instance_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let spec = instance("dual-section-gap.json");
    let o = monadkit(&["certify-simplicity", "--spec", &spec, "--json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["kind"], "simplicity-certificate");
    assert_eq!(doc["certificate"]["verdict"], "inconclusive");
    assert_eq!(doc["certificate"]["upper_bound"], Value::Null);
}

#[test]
fn malformed_spec_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"family\": \"section3\",\n  \"copies\": [1, 1]\n  \"k\": 1\n}\n").unwrap();
    let o = monadkit(&["verify", "--spec", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4"), "{err}");

    let missing = monadkit(&["verify", "--spec", "/nonexistent/spec.json"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    let flag = monadkit(&["verify", "--bogus"], dir.path());
    assert_eq!(flag.status.code(), Some(2));
    let even = monadkit(&["build", "--family", "section3", "--factors", "2,1", "--k", "1"], dir.path());
    assert_eq!(even.status.code(), Some(2));
}

#[test]
fn stored_certificates_recheck_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let o = monadkit(
        &["certify-simplicity", "--family", "section4", "--n", "1", "--m", "1", "--l", "1", "--alpha", "1", "--beta", "1", "--gamma", "1", "--k", "1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let path = dir.path().join("simplicity-certificate-section4-1-1-1-a1-b1-g1-k1.json");
    let r = monadkit(&["recheck", path.to_str().unwrap()], dir.path());
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    assert!(stdout(&r).contains("reproduced byte for byte"));

    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"forced_zero\": true", "\"forced_zero\": false", 1);
    assert_ne!(tampered, text);
    std::fs::write(&path, tampered).unwrap();
    let r = monadkit(&["recheck", path.to_str().unwrap()], dir.path());
    assert_eq!(r.status.code(), Some(1), "{}", stdout(&r));
    assert!(stdout(&r).contains("NOT reproduced"));
}

#[test]
fn every_document_kind_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let spec = instance("o11-middle-counterexample.json");
    for cmd in ["build", "verify", "certify-stability", "certify-simplicity"] {
        monadkit(&[cmd, "--spec", &spec], dir.path());
    }
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 4);
    for f in files {
        let r = monadkit(&["recheck", f.to_str().unwrap()], dir.path());
        assert_eq!(r.status.code(), Some(0), "{}: {}", f.display(), stdout(&r));
    }
}

#[test]
fn out_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = monadkit(
        &["build", "--family", "section3", "--factors", "1,1", "--k", "2", "--out", flag_dir.path().to_str().unwrap()],
        env_dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.path().join("monad-spec-section3-1x1-k2.json").exists());
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 0);
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = monadkit(&["selftest"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 4);
}
