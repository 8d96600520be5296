//! Helpers shared by the CLI test targets: run the real binary and check its
//! stdout against `docs/cli-schema.json`.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus(name: &str) -> PathBuf {
    root().join("corpus").join(name)
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
}

impl Output {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.stdout))
    }
}

pub fn qwp_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qwp"));
    cmd.args(args).env_remove("QWP_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
    }
}

pub fn qwp(args: &[&str]) -> Output {
    qwp_env(args, &[])
}

fn schema_doc() -> Value {
    let text = std::fs::read_to_string(root().join("docs/cli-schema.json")).expect("schema file");
    serde_json::from_str(&text).expect("schema is JSON")
}

/// Validation errors of `value` against the named definition.
pub fn schema_errors(def: &str, value: &Value) -> Vec<String> {
    let mut doc = schema_doc();
    assert!(doc["$defs"].get(def).is_some(), "no schema definition {def}");
    doc["$ref"] = Value::String(format!("#/$defs/{def}"));
    let v = jsonschema::validator_for(&doc).expect("schema compiles");
    v.iter_errors(value).map(|e| e.to_string()).collect()
}

pub fn assert_schema(def: &str, out: &Output) -> Value {
    let v = out.json();
    let errs = schema_errors(def, &v);
    assert!(errs.is_empty(), "{def}: {errs:?}\n{}", out.stdout);
    v
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

/// Dense complex matrix from the wire form.
pub fn matrix(v: &Value) -> Vec<Vec<(f64, f64)>> {
    let (rows, cols) = (v["rows"].as_u64().unwrap() as usize, v["cols"].as_u64().unwrap() as usize);
    let e = v["entries"].as_array().unwrap();
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let z = &e[i * cols + j];
                    (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())
                })
                .collect()
        })
        .collect()
}

pub fn max_diff(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut m: f64 = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            m = m.max((x.0 - y.0).abs()).max((x.1 - y.1).abs());
        }
    }
    m
}

pub fn real(rows: &[&[f64]]) -> Vec<Vec<(f64, f64)>> {
    rows.iter().map(|r| r.iter().map(|x| (*x, 0.0)).collect()).collect()
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// `{"sig": [...], "entries": [...]}` from real row lists.
pub fn tuple_json(entries: &[Vec<Vec<f64>>]) -> String {
    let ents: Vec<Value> = entries
        .iter()
        .map(|m| {
            let flat: Vec<Value> = m.iter().flatten().map(|x| serde_json::json!([x, 0.0])).collect();
            serde_json::json!({"rows": m.len(), "cols": m[0].len(), "entries": flat})
        })
        .collect();
    let sig: Vec<usize> = entries.iter().map(Vec::len).collect();
    serde_json::json!({"sig": sig, "entries": ents}).to_string()
}

/// Writes all example files into `dir`.
pub fn examples(dir: &Path) {
    for args in [
        vec!["example", "coin"],
        vec!["example", "bell"],
        vec!["example", "grover"],
        vec!["example", "grover", "--n", "3", "--s", "5"],
    ] {
        let mut a = args.clone();
        a.extend(["--out-dir", p(dir)]);
        let out = qwp(&a);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert_schema("example", &out);
    }
}
