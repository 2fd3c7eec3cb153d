// Mean-variance efficient frontier over all deterministic policies.

use mvmdp::frontier::{efficient_frontier, enumerate_all, FrontierReport, DEFAULT_CLASS_TOLERANCE};
use mvmdp::io::read_model;
use mvmdp::solve::DEFAULT_CAP;

pub fn run_example() -> FrontierReport {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper_sec4.json");
    let (model, _) = read_model(path).unwrap();
    let report = efficient_frontier(enumerate_all(&model, DEFAULT_CAP).unwrap(), DEFAULT_CLASS_TOLERANCE);
    for class in &report.mean_classes {
        let members: Vec<Vec<u32>> = class
            .members
            .iter()
            .map(|&k| report.entries[k].policy.labels(&model))
            .collect();
        println!("mean {:.4?}: {members:?}", class.mean.values);
    }
    for e in report.efficient_entries() {
        println!(
            "efficient {:?}: J = {:.4?}, sigma^2 = {:.4?}",
            e.policy.labels(&model),
            e.mean.values,
            e.variance.values
        );
    }
    report
}

#[allow(dead_code)]
fn main() {
    run_example();
}
