#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use mvmdp::io::read_model;
use mvmdp::{DeterministicPolicy, MdpModel};

pub const MODEL_REL: &str = "examples/paper_sec4.json";

pub fn model_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(MODEL_REL)
}

pub fn model() -> MdpModel {
    read_model(model_path()).expect("bundled model").0
}

/// `d_k` for k = 1..=12, second state varying fastest.
pub fn d(model: &MdpModel, k: usize) -> DeterministicPolicy {
    let labels = [(k as u32 - 1) / 4 + 1, (k as u32 - 1) % 4 + 1];
    DeterministicPolicy::from_labels(model, &labels).unwrap()
}

/// Reference means and variances, four decimals.
pub const TABLE: [([f64; 2], [f64; 2]); 12] = [
    ([2.5, 4.5], [0.25, 0.25]),
    ([2.2857, 3.4286], [0.0834, 0.1052]),
    ([2.5, 4.5], [0.25, 0.25]),
    ([2.5, 4.5], [0.2353, 0.0588]),
    ([2.5, 4.5], [0.3222, 0.2556]),
    ([2.125, 3.375], [0.1302, 0.1302]),
    ([2.5, 4.5], [0.3235, 0.2647]),
    ([2.5, 4.5], [0.2963, 0.0741]),
    ([2.6172, 4.5234], [0.2271, 0.2271]),
    ([2.125, 3.375], [0.1034, 0.1264]),
    ([2.6312, 4.5562], [0.2316, 0.2316]),
    ([2.6364, 4.5682], [0.1964, 0.0491]),
];

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Runs the binary from the crate directory.
pub fn mvmdp(args: &[&str]) -> Output {
    mvmdp_env(args, &[])
}

pub fn mvmdp_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mvmdp"));
    cmd.current_dir(env!("CARGO_MANIFEST_DIR")).args(args).env_remove("MVMDP_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn json_report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

/// Prints the verdict line for an acceptance criterion and fails on any
/// recorded problem.
pub fn verdict(criterion: u32, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS");
    } else {
        println!("criterion {criterion}: FAIL");
        for f in failures {
            println!("  {f}");
        }
        panic!("criterion {criterion} failed with {} problems", failures.len());
    }
}
