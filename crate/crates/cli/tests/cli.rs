use std::path::Path;
use std::process::{Command, Output};

fn qap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qap-rts")).args(args).output().unwrap()
}

fn generate(dir: &Path, n: usize, k: usize, seed: u64) -> String {
    let path = dir.join(format!("g{n}k{k}.dat"));
    let p = path.to_str().unwrap();
    let out = qap(&["generate", "--n", &n.to_string(), "--k", &k.to_string(), "--seed", &seed.to_string(), "-o", p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p.to_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_reports_identical_traces() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), 100, 3, 1);
    let out = qap(&["verify", &inst, "--iterations", "10000", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["outcome"], "identical");
    assert_eq!(report["iterations"], 10000);
}

#[test]
fn both_engines_report_the_same_best() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), 60, 4, 2);
    let trace = dir.path().join("trace.csv");
    let dense = qap(&["solve", &inst, "--engine", "dense", "--iterations", "2000", "--seed", "9"]);
    let sparse = qap(&[
        "solve", &inst, "--engine", "sparse", "--iterations", "2000", "--seed", "9", "--trace", trace.to_str().unwrap(),
    ]);
    assert!(dense.status.success() && sparse.status.success());
    let (a, b) = (json(&dense), json(&sparse));
    assert_eq!(a["best_cost"], b["best_cost"]);
    assert_eq!(a["best_permutation"], b["best_permutation"]);
    assert_eq!(a["instance"], "g60k4");
    assert_eq!(std::fs::read_to_string(&trace).unwrap().lines().count(), 2001);
}

#[test]
fn generated_file_parses_in_both_orders() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.dat");
    let p = path.to_str().unwrap();
    assert!(qap(&["generate", "--n", "10", "--k", "3", "--order", "distance-first", "-o", p]).status.success());
    let out = qap(&["solve", p, "--order", "distance-first", "--iterations", "10", "--engine", "dense"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["n"], 10);
}

#[test]
fn odd_degree_sum_exits_with_one() {
    let out = qap(&["generate", "--n", "5", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn missing_file_exits_with_one() {
    let out = qap(&["solve", "/nonexistent/instance.dat"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qap(&["solve", "--bogus"]).status.code(), Some(2));
    assert_eq!(qap(&["bench"]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv_rows() {
    let out = qap(&["bench", "--iterations", "200", "--quick", "--seeds", "1", "degree", "--n", "40", "--degrees", "3,4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,engine,seed,iterations,sec_per_iter,pq_fraction"));
    assert_eq!(lines.count(), 2);
}
