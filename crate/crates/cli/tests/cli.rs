use std::path::PathBuf;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = helical_cli::run(std::iter::once("helical").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(!out.is_empty(), "no report; stderr: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn generated_files_match_fixtures_and_validate() {
    for (fixture_name, args) in [
        ("b2.json", vec!["generate", "beilinson", "2"]),
        ("dualnumbers.json", vec!["generate", "dualnumbers", "1"]),
        ("mkronecker-2-1.json", vec!["generate", "mkronecker", "2", "1"]),
    ] {
        let (code, out, _) = run(&args);
        assert_eq!(code, 0);
        assert_eq!(out, std::fs::read_to_string(fixture(fixture_name)).unwrap(), "{fixture_name}");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gen.json");
        std::fs::write(&path, out).unwrap();
        let (code, r) = report(&["validate", path.to_str().unwrap()]);
        assert_eq!((code, r["overall"].as_str()), (0, Some("pass")));
    }
    let (code, _, err) = run(&["generate", "beilinson", "1"]);
    assert_eq!(code, 3);
    assert!(err.contains("n >= 2"));
    let (code, out, _) = run(&["generate", "beilinson", "2", "--prime", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"prime\""));
}

#[test]
fn exit_statuses_on_shipped_fixtures() {
    let b2 = fixture("b2.json");
    let neg = fixture("mkronecker-2-1.json");
    let dn = fixture("dualnumbers.json");
    assert_eq!(run(&["acyclic", &b2]).0, 0);
    assert_eq!(run(&["acyclic", &neg, "--d", "1", "--window", "-2:5"]).0, 1);
    assert_eq!(run(&["acyclic", &dn]).0, 1);
    assert_eq!(run(&["gorenstein", &neg]).0, 2);
    assert_eq!(run(&["pipeline", &b2]).0, 0);
    assert_eq!(run(&["pipeline", &neg]).0, 1);
    assert_eq!(run(&["pipeline", &dn]).0, 1);
}

#[test]
fn pipeline_stops_at_first_failure() {
    let (_, r) = report(&["pipeline", &fixture("mkronecker-2-1.json")]);
    let checks = r["checks"].as_array().unwrap();
    let status = |name: &str| checks.iter().find(|c| c["name"] == name).unwrap()["status"].as_str().unwrap().to_owned();
    assert_eq!(status("acyclic: acyclic"), "fail");
    for s in ["zalgebra", "gorenstein", "hilbert"] {
        assert_eq!(status(s), "skipped");
    }
}

#[test]
fn errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"field\": {\"type\": \"rational\"}, \"objects\": [").unwrap();
    let (code, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("cannot parse"));
    assert_eq!(run(&["validate", "/nonexistent/file.json"]).0, 3);
    assert_eq!(run(&["validate", &fixture("b2.json"), "--bogus"]).0, 3);
    assert_eq!(run(&["helix", &fixture("b2.json"), "--window", "5:1"]).0, 3);
    assert_eq!(run(&["helix", &fixture("b2.json"), "--window", "2:6"]).0, 3);
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn report_file_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, stdout, _) = run(&["validate", &fixture("dualnumbers.json"), "--report", out.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["command"], "validate");
    assert_eq!(r["input"]["file"], "dualnumbers.json");
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "input", "parameters", "checks", "overall", "data"]);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let b2 = fixture("b2.json");
    let one = run(&["zalgebra", &b2, "--threads", "1"]).1;
    let four = run(&["zalgebra", &b2, "--threads", "4"]).1;
    assert_eq!(one, four);
}

#[test]
fn prime_field_gives_the_same_dimensions() {
    let b2 = fixture("b2.json");
    let (_, q) = report(&["hilbert", &b2]);
    let (code, p) = report(&["hilbert", &b2, "--prime", "101"]);
    assert_eq!(code, 0);
    assert_eq!(q["data"], p["data"]);
}

#[test]
fn single_mutation() {
    let (code, r) = report(&["mutate", &fixture("b2.json"), "--slot", "2", "--direction", "left"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["slot 2: right after left", "slot 2: euler form"]);
    assert_eq!(run(&["mutate", &fixture("b2.json"), "--slot", "3"]).0, 3);
}
