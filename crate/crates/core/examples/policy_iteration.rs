// Policy iteration trace from the policy (2,1) with λ = (2.5, 4.5).

use mvmdp::constrain::feasible_sets;
use mvmdp::io::read_model;
use mvmdp::solve::{policy_iteration, SolveResult, DEFAULT_TIE_TOLERANCE};
use mvmdp::DeterministicPolicy;

pub fn run_example() -> SolveResult {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();
    let sets = feasible_sets(&model, &[2.5, 4.5], 1e-7).unwrap();
    let start = DeterministicPolicy::from_labels(&model, &[2, 1]).unwrap();
    let result = policy_iteration(&model, &sets, Some(&start), DEFAULT_TIE_TOLERANCE).unwrap();
    for (k, step) in result.trace.iter().enumerate() {
        println!("iteration {k}: policy {:?}, g = {:.4?}", step.policy.labels(&model), step.values.values);
        for (i, scores) in step.scores.as_ref().unwrap().iter().enumerate() {
            let labels = sets.labels(&model)[i].clone();
            println!("  state {} scores {:?} for actions {labels:?}", i + 1, scores.iter().map(|s| format!("{s:.4}")).collect::<Vec<_>>());
        }
    }
    println!(
        "optimum {:?}, variance {:.4?}, {} iterations",
        result.optimal_policy.labels(&model),
        result.optimal_variance.values,
        result.iterations
    );
    result
}

#[allow(dead_code)]
fn main() {
    run_example();
}
