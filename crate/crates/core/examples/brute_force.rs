// Exhaustive search of the constrained set, including ties.

use mvmdp::constrain::feasible_sets;
use mvmdp::io::read_model;
use mvmdp::solve::{brute_force, BruteForceOutcome, DEFAULT_CAP};

pub fn run_example() -> Vec<BruteForceOutcome> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();
    let mut out = Vec::new();
    for lambda in [[2.5, 4.5], [2.125, 3.375]] {
        let sets = feasible_sets(&model, &lambda, 1e-7).unwrap();
        let outcome = brute_force(&model, &sets, DEFAULT_CAP).unwrap();
        match &outcome {
            BruteForceOutcome::Optimal { result, co_optimal } => {
                println!(
                    "lambda {lambda:?}: optimum {:?} with variance {:.4?} among {} members",
                    result.optimal_policy.labels(&model),
                    result.optimal_variance.values,
                    result.iterations
                );
                for p in co_optimal.iter().filter(|p| **p != result.optimal_policy) {
                    println!("  co-optimal {:?}", p.labels(&model));
                }
            }
            BruteForceOutcome::NoDominator { pareto } => {
                println!("lambda {lambda:?}: no dominating member, {} Pareto members", pareto.len());
            }
        }
        out.push(outcome);
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
