use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_ethic-dual");

struct Run {
    code: i32,
    doc: Value,
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("ETHIC_DUAL_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn ethic-dual");
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text:?} / {}", String::from_utf8_lossy(&out.stderr)));
    Run {
        code: out.status.code().unwrap(),
        doc,
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn recheck(dir: &Path, doc: &Value) -> Run {
    let p = write(dir, "cert.json", &doc.to_string());
    run(&["--recheck", &p])
}

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn snf_document_shape() {
    let t = TempDir::new().unwrap();
    let m = write(t.path(), "m.txt", "2 2\n2 0\n0 3\n");
    let r = run(&["snf", &m]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["schema"], "ethic-dual/1");
    assert_eq!(r.doc["command"], "snf");
    assert_eq!(r.doc["verified"], true);
    assert_eq!(r.doc["invariant_factors"], serde_json::json!(["1", "6"]));
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
}

#[test]
fn big_integers_are_strings() {
    let t = TempDir::new().unwrap();
    let big = "123456789012345678901234567890";
    let m = write(t.path(), "m.txt", &format!("1 1\n{big}\n"));
    let r = run(&["cokernel", &m]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["invariant_factors"][0], big);
    assert_eq!(r.doc["cokernel"]["torsion_order"], big);
}

#[test]
fn graph_invariants() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "k4.graph", K4);
    let r = run(&["trees", &g]);
    assert_eq!((r.code, r.doc["tau"].as_str()), (0, Some("16")));
    let r = run(&["jacobian", &g]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["jacobian"]["torsion_factors"], serde_json::json!(["4", "4"]));
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
}

#[test]
fn divisor_commands() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "k4.graph", K4);
    let canon = write(t.path(), "k.txt", "1 1 1 1\n");
    let r = run(&["rank", &g, &canon]);
    assert_eq!((r.code, r.doc["rank"].as_i64()), (0, Some(2)));
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
    let r = run(&["rr-check", &g, &canon]);
    assert_eq!((r.code, r.doc["holds"].as_bool()), (0, Some(true)));
    let d = write(t.path(), "d.txt", "2 0 -1 1\n");
    let r = run(&["reduce", &g, &d, "--strategy", "single"]);
    assert_eq!(r.code, 0);
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
}

#[test]
fn farkas_negative_and_positive() {
    let t = TempDir::new().unwrap();
    let a = write(t.path(), "a.txt", "1 2\n2 4\n");
    let r = run(&["farkas", "--matrix", &a, "--rhs", &write(t.path(), "b5.txt", "5\n")]);
    assert_eq!((r.code, r.doc["feasible"].as_bool()), (1, Some(false)));
    assert_eq!(r.doc["verified"], true);
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
    let r = run(&["farkas", "--matrix", &a, "--rhs", &write(t.path(), "b6.txt", "6\n")]);
    assert_eq!((r.code, r.doc["feasible"].as_bool()), (0, Some(true)));
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
}

#[test]
fn torsion_is_a_certified_negative() {
    let t = TempDir::new().unwrap();
    let m = write(t.path(), "m.txt", "2 2\n2 0\n0 3\n");
    assert_eq!(run(&["intdual", &m]).code, 1);
    assert_eq!(run(&["reversible", &m]).code, 1);
    let id = write(t.path(), "id.txt", "2 2\n1 0\n0 -1\n");
    let r = run(&["reversible", &id]);
    assert_eq!((r.code, r.doc["reversible"].as_bool()), (0, Some(true)));
}

#[test]
fn certify_and_lp() {
    let t = TempDir::new().unwrap();
    let spec = write(
        t.path(),
        "p.json",
        r#"{"integer": {"A": [[1]], "b": [1], "c": [-1]},
            "real": {"A": [["1", "2"]], "b": ["4"], "c": ["3", "6"]},
            "conic": {"A": [[1, 1]], "b": ["1"], "c": ["1", "1"]}}"#,
    );
    let r = run(&["certify", "--spec", &spec]);
    assert_eq!((r.code, r.doc["certified"].as_bool()), (0, Some(true)));
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
    let lp = write(t.path(), "lp.json", r#"{"objective":["1","1"],"eq_matrix":[["1","1"]],"eq_rhs":["1"],"nonneg":[0,1]}"#);
    let r = run(&["lp", &lp]);
    assert_eq!((r.code, r.doc["status"].as_str()), (0, Some("optimal")));
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
    let infeasible = write(t.path(), "inf.json", r#"{"objective":["1"],"eq_matrix":[["1"]],"eq_rhs":["-1"]}"#);
    assert_eq!(run(&["lp", &infeasible]).code, 1);
}

#[test]
fn entropy_chain() {
    let t = TempDir::new().unwrap();
    let c = write(t.path(), "c.json", r#"[["2 2","2 0","0 3"],["1 2","1 0"]]"#);
    let r = run(&["entropy", "--chain", &c]);
    assert_eq!(r.code, 0);
    let orders: Vec<&str> = r.doc["per_time"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["torsion_order"].as_str().unwrap())
        .collect();
    assert_eq!(orders, ["6", "2"]);
    assert_eq!(recheck(t.path(), &r.doc).code, 0);
}

#[test]
fn input_errors_are_machine_readable() {
    let t = TempDir::new().unwrap();
    let bad = write(t.path(), "bad.txt", "2 2\n1 x\n0 1\n");
    let r = run(&["snf", &bad]);
    assert_eq!(r.code, 2);
    assert_eq!(r.doc["schema"], "ethic-dual/1");
    assert!(r.doc["error"]["kind"].is_string());
    assert!(r.doc["error"]["message"].is_string());
    let r = run(&["snf", t.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let r = run(&["no-such-command"]);
    assert_eq!(r.code, 2);
    assert!(r.doc["error"].is_object());
}

#[test]
fn tampered_certificate_fails_recheck() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "k4.graph", K4);
    let mut doc = run(&["trees", &g]).doc;
    doc["tau"] = Value::String("15".into());
    let r = recheck(t.path(), &doc);
    assert_eq!(r.code, 1);
    assert_eq!(r.doc["verified"], false);
}

#[test]
fn cap_env_and_flag() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "k4.graph", K4);
    let d = write(t.path(), "d.txt", "5 0 0 0\n");
    let r = run_env(&["rank", &g, &d], &[("ETHIC_DUAL_CAP", "1")]);
    assert_eq!(r.code, 2);
    assert_eq!(r.doc["error"]["kind"], "cap_exceeded");
    // the flag takes precedence over the environment
    let r = run_env(&["rank", &g, &d, "--cap", "10"], &[("ETHIC_DUAL_CAP", "1")]);
    assert_eq!((r.code, r.doc["rank"].as_i64()), (0, Some(2)));
}

#[test]
fn out_flag_writes_file() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "k4.graph", K4);
    let out = t.path().join("o.json");
    let status = Command::new(BIN)
        .args(["trees", &g, "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["tau"], "16");
}

#[test]
fn batch_is_independent_of_jobs() {
    let t = TempDir::new().unwrap();
    let dir = t.path().join("graphs");
    fs::create_dir(&dir).unwrap();
    for n in 3..8 {
        let mut text = format!("{n} {n}\n");
        for i in 0..n {
            text.push_str(&format!("{i} {}\n", (i + 1) % n));
        }
        fs::write(dir.join(format!("c{n}.graph")), text).unwrap();
    }
    let d = dir.to_str().unwrap();
    let one = run(&["batch", d, "--command", "trees", "--jobs", "1"]);
    let four = run(&["batch", d, "--command", "trees", "--jobs", "4"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.doc, four.doc);
    let taus: Vec<&str> = one.doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["document"]["tau"].as_str().unwrap())
        .collect();
    assert_eq!(taus, ["3", "4", "5", "6", "7"]);
    assert_eq!(recheck(t.path(), &one.doc).code, 0);
}
