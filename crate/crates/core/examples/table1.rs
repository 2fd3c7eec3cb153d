// Mean and variance of every deterministic policy of the two-state model.

use mvmdp::evaluate::{evaluate, variance_via_f};
use mvmdp::io::read_model;

pub fn run_example() -> Vec<(Vec<u32>, Vec<f64>, Vec<f64>)> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).expect("bundled model loads");
    let mut rows = Vec::new();
    println!("{:<5} {:<7} {:<20} {:<20}", "d", "policy", "J", "sigma^2");
    for (k, policy) in model.policies().enumerate() {
        let eval = evaluate(&model, &policy).unwrap();
        let check = variance_via_f(&model, &policy).unwrap();
        assert!(eval.variance.max_abs_diff(&check) < 1e-9);
        let labels = policy.labels(&model);
        println!(
            "d{:<4} {:<7} ({:.4}, {:.4})     ({:.4}, {:.4})",
            k + 1,
            format!("{labels:?}"),
            eval.mean[0],
            eval.mean[1],
            eval.variance[0],
            eval.variance[1]
        );
        rows.push((labels, eval.mean.into_inner(), eval.variance.into_inner()));
    }
    rows
}

#[allow(dead_code)]
fn main() {
    run_example();
}
