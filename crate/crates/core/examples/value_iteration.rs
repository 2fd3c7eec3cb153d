// Value iteration on the constrained problem, compared with policy iteration.

use mvmdp::constrain::feasible_sets;
use mvmdp::io::read_model;
use mvmdp::solve::{policy_iteration, value_iteration, SolveResult, DEFAULT_TIE_TOLERANCE};

pub fn run_example() -> (SolveResult, SolveResult) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();
    let sets = feasible_sets(&model, &[2.5, 4.5], 1e-7).unwrap();
    let vi = value_iteration(&model, &sets, 1e-10, DEFAULT_TIE_TOLERANCE).unwrap();
    let pi = policy_iteration(&model, &sets, None, DEFAULT_TIE_TOLERANCE).unwrap();
    for (k, step) in vi.trace.iter().enumerate().step_by(4) {
        println!("sweep {k:>2}: V = {:.10?}", step.values.values);
    }
    println!(
        "value iteration: {:?} after {} sweeps; policy iteration: {:?} after {}",
        vi.optimal_policy.labels(&model),
        vi.iterations,
        pi.optimal_policy.labels(&model),
        pi.iterations
    );
    (vi, pi)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
