//! CLI contract: output shapes, exit codes, and cache behavior.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fxy"))
        .args(args)
        .env_remove("MIL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn search_text_certificate() {
    let out = run(&["search", "--max-leaves", "8"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "0 identities found; certificate covers 626 terms\n"
    );
}

#[test]
fn lexmin_text() {
    let out = run(&["lexmin", "2", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "f(f(f(x,f(x,x)),x),x)\n");
}

#[test]
fn analyze_json() {
    let out = run(&["analyze", "f(x,f(x,x))", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dege"], 9);
    assert_eq!(v["orde"], 2);
    assert_eq!(v["cores"].as_array().unwrap().len(), 1);
    assert_eq!(v["developments"], 1);
}

#[test]
fn enumerate_csv() {
    let out = run(&["enumerate", "--max-leaves", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("term,leaves,dege,orde"));
    assert_eq!(lines.next(), Some("x,1,1,1"));
    assert_eq!(lines.next(), Some("f(x,x),2,3,2"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["analyze", "f(x"][..],
        &["verify", "no-such-claim"][..],
        &["frobnicate"][..],
        &["analyze", "f(x,x)", "--format", "csv"][..],
        &["dioph", "eq9", "0", "2", "0", "0", "1", "1"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{:?}", args);
    }
}

#[test]
fn infeasible_exits_3() {
    // image degree 162: far more candidates than the isolation budget
    let out = run(&["isolated", "f(f(x,f(x,f(x,f(x,x)))),x)"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("infeasible"));
}

#[test]
fn isolated_witness_reported() {
    let out = run(&["isolated", "f(x,x)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "isolated: f(x,x)\n");
}

#[test]
fn verify_json_shape() {
    let out = run(&["verify", "maxt-mixed-chain", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["claim_id"], "maxt-mixed-chain");
    assert_eq!(v[0]["verdict"], "Pass");
}

#[test]
fn dioph_text_and_csv() {
    let out = run(&["dioph", "--max-exp", "4", "eq10"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2^0 3^0 + 2^0 3^1 = 2^1 3^0 + 2^1 3^0 = 4 (nontrivial)"));

    let out = run(&["dioph", "--format", "csv", "eq9", "1", "1", "0", "0", "1", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("k1,k2,l1,l2,m,n,i,j,pi1,pi2\n"));
    assert!(text.contains("0,1,0,2,1,1,0,0,1,0"));
}

#[test]
fn cache_round_trip_and_env_override() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("fxy-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_file(&path);

    let baseline = run(&["analyze", "f(x,f(x,x))", "--format", "json"]);
    let first = Command::new(env!("CARGO_BIN_EXE_fxy"))
        .args(["analyze", "f(x,f(x,x))", "--format", "json"])
        .env("MIL_CACHE", &path)
        .output()
        .unwrap();
    assert!(first.status.success());
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("MIL1 base="), "{}", header);

    // a second run hits the cache; output is identical with and without it
    let second = Command::new(env!("CARGO_BIN_EXE_fxy"))
        .args(["analyze", "f(x,f(x,x))", "--format", "json"])
        .env("MIL_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, baseline.stdout);
    let _ = std::fs::remove_file(&path);
}
