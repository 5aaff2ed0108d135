use std::process::{Command, Output};

use serde_json::Value;

fn univoque(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univoque")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn kl_constant_decimals() {
    let out = univoque(&["constants", "--M", "1", "--which", "kl", "--precision", "1e-8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["lo"].as_str().unwrap().starts_with("1.787"));
    assert!(v["hi"].as_str().unwrap().starts_with("1.787"));
    assert_eq!(v["provenance"]["tool"], "univoque");
}

#[test]
fn dyadic_point_has_two_live_paths() {
    let out = univoque(&["expand", "--M", "1", "--q", "2", "--x", "1/2", "--depth", "6", "--mode", "enumerate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["live"], 2);
    let paths: Vec<&str> = v["paths"].as_array().unwrap().iter().map(|p| p["digits"].as_str().unwrap()).collect();
    assert_eq!(paths, ["011111", "100000"]);
}

#[test]
fn tribonacci_root() {
    let out = univoque(&["root", "--M", "1", "--diff", "(-1,-1,-1)(0)", "--lo", "1.79", "--hi", "1.99"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["root"]["result"], "UniqueRoot");
    assert!(v["root"]["q"]["lo"].as_str().unwrap().starts_with("1.83928675"));
    assert!(v["root"]["q"]["hi"].as_str().unwrap().starts_with("1.83928675"));
}

#[test]
fn output_is_deterministic() {
    let args = ["u2", "check", "--M", "1", "--m", "0", "--a", "(0)", "--b", "(0)", "--q", "19/10"];
    let a = univoque(&args);
    let b = univoque(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["valid"], false);
}

#[test]
fn domain_errors_exit_2() {
    let out = univoque(&["scan", "--M", "1", "--q-lo", "7/4", "--q-hi", "7/4", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q_KL"));
    let out = univoque(&["expand", "--M", "1", "--q", "3", "--x", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = univoque(&["dim", "--M", "1", "--q", "7/4", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3_with_inconclusive_output() {
    let out = univoque(&["--budget", "10", "expand", "--M", "1", "--q", "19/10", "--x", "1/2", "--depth", "30", "--mode", "enumerate"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["inconclusive"], true);
}

#[test]
fn scan_csv_columns() {
    let out = univoque(&["scan", "--M", "1", "--q-lo", "1.8", "--q-hi", "1.99", "--steps", "3", "--n", "12", "--L", "12", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q_lo,q_hi,dim_lo,dim_hi,bound_lo,bound_hi,inO");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
}

#[test]
fn named_bases() {
    for name in ["kl", "gr", "tribonacci"] {
        let out = univoque(&["unique", "--M", "1", "--q", name, "--seq", "(0)"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["verdict"]["verdict"], "UniqueCertified");
    }
}

#[test]
fn dimension_json() {
    let out = univoque(&["dim", "--M", "1", "--q", "2", "--n", "10", "--L", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hi"], "1");
    assert_eq!(v["counts"]["upperCount"], "1024");
}

#[test]
fn selftests_pass() {
    let out = univoque(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    for sub in ["constants", "expand", "unique", "root", "certify", "dim", "scan", "inspect"] {
        let out = univoque(&[sub, "--selftest"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
    }
    assert_eq!(univoque(&["u2", "--selftest"]).status.code(), Some(0));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("univoque-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gr.json");
    let out = univoque(&["constants", "--M", "2", "--which", "gr", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lo_exact"], "2");
    std::fs::remove_dir_all(&dir).unwrap();
}
