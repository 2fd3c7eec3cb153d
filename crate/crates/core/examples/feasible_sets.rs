// Feasible action sets for a target mean, from exact and rounded targets.

use mvmdp::constrain::{enumerate_feasible_policies, feasible_sets};
use mvmdp::evaluate::mean_performance;
use mvmdp::io::read_model;
use mvmdp::DeterministicPolicy;

pub fn run_example() -> Vec<Vec<Vec<u32>>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();

    // Exact target taken from a policy's own mean.
    let d1 = DeterministicPolicy::from_labels(&model, &[1, 1]).unwrap();
    let lambda = mean_performance(&model, &d1).unwrap();
    let exact = feasible_sets(&model, &lambda, 1e-7).unwrap();

    // A target printed to four decimals needs a looser tolerance.
    let rounded = feasible_sets(&model, &[2.2857, 3.4286], 1e-3).unwrap();
    let other = feasible_sets(&model, &[2.125, 3.375], 1e-7).unwrap();

    let mut out = Vec::new();
    for (name, sets) in [("J(1,1)", &exact), ("(2.2857, 3.4286)", &rounded), ("(2.125, 3.375)", &other)] {
        let labels = sets.labels(&model);
        println!("lambda = {name}: sets {labels:?}, {} policies", sets.policy_count());
        for p in enumerate_feasible_policies(sets).unwrap() {
            println!("  member {:?}", p.labels(&model));
        }
        out.push(labels);
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
