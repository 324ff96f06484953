use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wittlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittlab")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wittlab-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(wittlab(&["run", "--instance", "/nonexistent.cfg"]).status.code(), Some(2));
    let dir = scratch("config");
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "name = \"x\"\np = 2\n").unwrap();
    assert_eq!(wittlab(&["run", "--instance", bad.to_str().unwrap()]).status.code(), Some(2));
    let flagship = fixture("flagship.cfg");
    assert_eq!(wittlab(&["run", "--instance", &flagship, "--suite", "theorem2"]).status.code(), Some(2));
}

#[test]
fn bad_lambda_reports_not_divisible() {
    let out = wittlab(&["run", "--instance", &fixture("bad-lambda.cfg"), "--suite", "lemma1", "--no-timing"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let kinds: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["evidence"]["kind"].as_str())
        .collect();
    assert!(kinds.contains(&"NotDivisible"), "{kinds:?}");
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let charp = fixture("char-p.cfg");
    let run = |jobs: &str| wittlab(&["run", "--instance", &charp, "--suite", "lemma1", "--jobs", jobs, "--no-timing"]);
    let (one, four) = (run("1"), run("4"));
    assert_eq!(one.status.code(), four.status.code());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn tampered_cache_is_an_integrity_failure() {
    let dir = scratch("cache");
    let d = dir.to_str().unwrap();
    assert_eq!(wittlab(&["cache-build", "--cache", d, "--p", "2", "--depth", "3"]).status.code(), Some(0));
    assert_eq!(wittlab(&["cache-verify", "--cache", d, "--p", "2"]).status.code(), Some(0));

    let file = dir.join("structure-p2.txt");
    let text = std::fs::read_to_string(&file).unwrap();
    let tampered = text.replacen("-1 * X0 * Y0", "-3 * X0 * Y0", 1);
    assert_ne!(text, tampered);
    std::fs::write(&file, tampered).unwrap();

    let out = wittlab(&["cache-verify", "--cache", d, "--p", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks"][0]["evidence"]["bad_record"], "(2, sum, 1)");

    let run = wittlab(&["run", "--instance", &fixture("char-p.cfg"), "--suite", "lemma1", "--cache", d]);
    assert_eq!(run.status.code(), Some(3));
}
