#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn singularities() -> Vec<&'static str> {
    let mut v = vec!["c2.json", "cn3.json", "c4.json", "conifold.json", "c2_boundary.json"];
    v.extend(["random1.json", "random2.json", "random3.json", "random4.json", "random5.json"]);
    v
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub json: serde_json::Value,
}

fn finish(out: Output) -> Run {
    let stdout = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let json = serde_json::from_str(stdout.trim()).unwrap_or(serde_json::Value::Null);
    Run { code: out.status.code().expect("exit code"), stdout, json }
}

pub fn fanocone(args: &[&str]) -> Run {
    finish(Command::new(env!("CARGO_BIN_EXE_fanocone")).args(args).output().expect("spawn fanocone"))
}

pub fn fanocone_stdin(args: &[&str], input: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fanocone"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn fanocone");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    finish(child.wait_with_output().unwrap())
}

pub fn f64s(v: &serde_json::Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(|x| x.as_f64().expect("number")).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
