use std::io::Write;
use std::process::{Command, Output, Stdio};

use leibniz3::catalog::{get_family, Family};
use leibniz3::exact::Rational;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_leibniz3"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn table_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

#[test]
fn single_word_trace() {
    let o = run(&["traces", "L1", "--word", "R1.R2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "5·z_1·z_2");
}

#[test]
fn info_l11() {
    let o = run(&["--json", "info", "L11"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["leib_dim"], 1);
    assert_eq!(v["ann_r_dim"], 2);
    assert_eq!(v["ncl"], 3);
    assert_eq!(v["aut_dim"], 5);
}

#[test]
fn classify_exit_codes() {
    let z = "[0,0,0]";
    let lie = format!(r#"{{"dim":3,"table":[[{z},[0,0,1],{z}],[[0,0,-1],{z},{z}],[{z},{z},{z}]]}}"#);
    let not_leibniz = format!(r#"{{"dim":3,"table":[[[0,1,0],{z},{z}],[[1,0,0],{z},{z}],[{z},{z},{z}]]}}"#);
    assert_eq!(run(&["classify", table_file(&lie).path().to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(run(&["classify", table_file(&not_leibniz).path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["classify", "/nonexistent/table.json"]).status.code(), Some(74));
    assert_eq!(run_with_stdin(&["classify", "-"], b"{").status.code(), Some(65));
}

#[test]
fn classify_recovers_lambda_after_basis_change() {
    let rec = get_family(Family::L7, Some(Rational::new(5, 7))).unwrap();
    let f = table_file(&serde_json::to_string(&rec.table).unwrap());
    let o = run(&["--json", "classify", f.path().to_str().unwrap(), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], "L7");
    assert_eq!(v["recovered_lambda"], "5/7");
}

#[test]
fn reports_validate() {
    for args in [&["--json", "verify"][..], &["--json", "invariants", "L3", "--m", "2"], &["--json", "aut", "L4", "--lambda", "2"]] {
        let o = run(args);
        assert!(o.status.success(), "{args:?}");
        let v = run_with_stdin(&["validate", "-"], &o.stdout);
        assert!(v.status.success(), "{args:?}: {}", String::from_utf8_lossy(&v.stderr));
    }
    let tampered = stdout(&run(&["--json", "verify"])).replacen("\"all_pass\": true", "\"all_pass\": false", 1);
    assert_eq!(run_with_stdin(&["validate", "-"], tampered.as_bytes()).status.code(), Some(65));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["traces", "L12"]).status.code(), Some(64));
    assert_eq!(run(&["traces", "L2", "--lambda", "0"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sequential_thread_setting() {
    let o = bin().env("LEIBNIZ_THREADS", "1").args(["invariants", "L1"]).output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("generation verified"));
    assert_eq!(bin().env("LEIBNIZ_THREADS", "zero").arg("catalog").output().unwrap().status.code(), Some(64));
}
