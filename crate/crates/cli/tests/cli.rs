use std::process::{Command, Output};

use serde_json::Value;

fn enumtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enumtc")).args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> (Value, Option<i32>) {
    let mut full = vec!["verify", "--no-timing", "--json", "-"];
    full.extend_from_slice(args);
    let out = enumtc(&full);
    (serde_json::from_slice(&out.stdout).expect("stdout is JSON"), out.status.code())
}

fn status(report: &Value, id: &str) -> String {
    report["claims"].as_array().unwrap().iter().find(|c| c["id"] == id).expect("claim present")["status"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn list_shows_every_claim() {
    let out = enumtc(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 28);
    for id in ["regseq-pu4k", "klein-equivalence", "thm-tc-all", "lit-tc-genus", "tc-compactness"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id}");
    }
}

#[test]
fn json_report_is_deterministic() {
    let a = enumtc(&["verify", "--no-timing", "--json", "-", "regseq-pu3h", "em-poincare-pu3h"]);
    let b = enumtc(&["verify", "--no-timing", "--json", "-", "em-poincare-pu3h", "regseq-pu3h"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = r["claims"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"nabla-generators-n3"));
    assert_eq!(r["summary"]["consistent"], true);
}

#[test]
fn unknown_claim_fails() {
    let out = enumtc(&["verify", "no-such-claim"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-claim"));
}

#[test]
fn missing_ids_is_a_usage_error() {
    let out = enumtc(&["verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_prime_and_degree() {
    let (r, code) = json_report(&["--prime", "5", "--max-degree", "8", "nabla-generators-n3"]);
    assert_eq!(code, Some(0));
    assert_eq!(r["config"]["prime"], 5);
    let ev = &r["claims"].as_array().unwrap().iter().find(|c| c["id"] == "nabla-generators-n3").unwrap()["evidence"];
    let primes = ev["primes"].as_array().unwrap();
    assert_eq!(primes.len(), 1);
    assert_eq!(primes[0]["p"], 5);
    let max = primes[0]["rows"].as_array().unwrap().iter().map(|row| row["degree"].as_u64().unwrap()).max();
    assert_eq!(max, Some(8));
}

#[test]
fn fermat_theorem_chain() {
    let (r, code) = json_report(&["thm-sg-line"]);
    assert_eq!(code, Some(0));
    for id in ["regseq-pu4k", "em-poincare-pu4k", "genus-pu4k", "fermat-lines", "k-faithful", "thm-sg-line"] {
        assert_eq!(status(&r, id), "verified", "{id}");
    }
    assert_eq!(status(&r, "lit-pullback-genus"), "assumed-from-literature");
    let g = &r["claims"].as_array().unwrap().iter().find(|c| c["id"] == "genus-pu4k").unwrap()["evidence"];
    assert_eq!(g["genus"], 16);
}

#[test]
fn json_file_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = enumtc(&["verify", "--threads", "1", "--json", path.to_str().unwrap(), "genus-pu3h"]);
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("genus-pu3h"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(status(&r, "genus-pu3h"), "verified");
    assert_eq!(r["summary"]["failed"], 0);
}
