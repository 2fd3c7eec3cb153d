// Random mixtures over the feasible sets keep the mean and never lower the
// variance below the deterministic optimum.

use mvmdp::constrain::feasible_sets;
use mvmdp::evaluate::evaluate_randomized;
use mvmdp::io::read_model;
use mvmdp::solve::{check_randomized_dominance, policy_iteration, RandomizedCheckReport, DEFAULT_TIE_TOLERANCE};
use mvmdp::RandomizedPolicy;

pub fn run_example() -> RandomizedCheckReport {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();
    let sets = feasible_sets(&model, &[2.5, 4.5], 1e-7).unwrap();
    let best = policy_iteration(&model, &sets, None, DEFAULT_TIE_TOLERANCE).unwrap();

    let uniform = RandomizedPolicy::uniform(&sets.per_state);
    let eval = evaluate_randomized(&model, &uniform).unwrap();
    println!("uniform mixture: J = {:.6?}, sigma^2 = {:.4?}", eval.mean.values, eval.variance.values);

    let report = check_randomized_dominance(&model, &sets, &best, 200, 11).unwrap();
    println!(
        "{} samples: max |J - lambda| = {:.1e}, min variance margin = {:.4}, {} violations",
        report.samples,
        report.max_mean_deviation,
        report.min_variance_margin,
        report.violations.len()
    );
    report
}

#[allow(dead_code)]
fn main() {
    run_example();
}
