// Simulated returns against the closed-form mean and variance.

use mvmdp::evaluate::evaluate;
use mvmdp::io::read_model;
use mvmdp::simulate::{sample_path_h_check, simulate_policy, SimulationEstimate};
use mvmdp::DeterministicPolicy;

pub fn run_example() -> Vec<(SimulationEstimate, f64, f64)> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();
    let mut out = Vec::new();
    for labels in [[2, 1], [1, 2]] {
        let d = DeterministicPolicy::from_labels(&model, &labels).unwrap();
        let eval = evaluate(&model, &d).unwrap();
        for start in 0..model.num_states() {
            let est = simulate_policy(&model, &d, start, 20_000, None, 7).unwrap();
            println!(
                "{labels:?} from state {}: mean {:.4} (exact {:.4}, se {:.1e}), variance {:.4} (exact {:.4}, se {:.1e})",
                start + 1,
                est.mean_estimate,
                eval.mean[start],
                est.std_error_mean,
                est.variance_estimate,
                eval.variance[start],
                est.std_error_variance
            );
            out.push((est, eval.mean[start], eval.variance[start]));
        }
        let h = sample_path_h_check(&model, &d, 20_000, 7).unwrap();
        println!("  one-step variance reward check: max |z| = {:.2}", h.max_abs_z());
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
