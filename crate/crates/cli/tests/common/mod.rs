#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

pub fn cantorsat<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_cantorsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn build(dir: &Path, name: &str, n: usize, depth: usize, seed: u64) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = cantorsat([
        "build".to_string(),
        format!("--n={n}"),
        format!("--depth={depth}"),
        format!("--seed={seed}"),
        format!("--out={}", path.display()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

/// Toggles edge `{a, b}` at `level` of a tower document, keeping the edge
/// list sorted. Returns whether the edge was present before.
pub fn toggle_edge(doc: &mut Value, level: usize, a: usize, b: usize) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    let edges = doc["levels"][level]["edges"]
        .as_array_mut()
        .expect("edge list");
    let mut pairs: Vec<[usize; 2]> = edges
        .iter()
        .map(|e| serde_json::from_value(e.clone()).unwrap())
        .collect();
    let present = match pairs.binary_search(&[a, b]) {
        Ok(i) => {
            pairs.remove(i);
            true
        }
        Err(i) => {
            pairs.insert(i, [a, b]);
            false
        }
    };
    *edges = pairs.iter().map(|p| serde_json::json!(p)).collect();
    present
}

pub fn level_order(doc: &Value, level: usize) -> usize {
    doc["levels"][level]["v"].as_u64().unwrap() as usize
}
