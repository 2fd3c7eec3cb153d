// The three solvers on randomly generated constrained problems.

use mvmdp::generate::{random_instance, ModelShape};
use mvmdp::solve::{brute_force, policy_iteration, value_iteration, DEFAULT_CAP, DEFAULT_TIE_TOLERANCE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the largest disagreement between solvers over all instances.
pub fn run_example() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shape = ModelShape::small();
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let inst = random_instance(&mut rng, &shape);
        let sets = mvmdp::constrain::feasible_sets(&inst.model, &inst.lambda, 1e-7).unwrap();
        let pi = policy_iteration(&inst.model, &sets, None, DEFAULT_TIE_TOLERANCE).unwrap();
        let vi = value_iteration(&inst.model, &sets, 1e-10, DEFAULT_TIE_TOLERANCE).unwrap();
        let bf = brute_force(&inst.model, &sets, DEFAULT_CAP).unwrap();
        let bf = bf.optimal().expect("a dominating member exists");
        let gap = pi
            .optimal_variance
            .max_abs_diff(&vi.optimal_variance)
            .max(pi.optimal_variance.max_abs_diff(&bf.optimal_variance));
        worst = worst.max(gap);
        println!(
            "instance {k:>2}: {} states, |D| = {:>2}, PI {} iterations, gap {gap:.1e}",
            inst.model.num_states(),
            sets.policy_count(),
            pi.iterations
        );
    }
    println!("largest disagreement {worst:.1e}");
    worst
}

#[allow(dead_code)]
fn main() {
    run_example();
}
