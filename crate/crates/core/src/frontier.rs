//! Mean-variance analysis of the full deterministic policy space.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluate::evaluate;
use crate::model::{DeterministicPolicy, MdpModel, ValueVector};

/// Default tolerance for grouping policies by mean vector.
pub const DEFAULT_CLASS_TOLERANCE: f64 = 1e-6;

/// Slack on the weak inequalities of the dominance test; a coordinate only
/// counts as strictly better beyond this margin.
pub const DOMINANCE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierEntry {
    pub policy: DeterministicPolicy,
    pub mean: ValueVector,
    pub variance: ValueVector,
}

impl FrontierEntry {
    /// Higher mean and lower variance in every state, strictly somewhere.
    pub fn dominates(&self, other: &FrontierEntry) -> bool {
        let t = DOMINANCE_TOLERANCE;
        let weak = self.mean.iter().zip(other.mean.iter()).all(|(a, b)| *a >= b - t)
            && self
                .variance
                .iter()
                .zip(other.variance.iter())
                .all(|(a, b)| *a <= b + t);
        let strict = self.mean.iter().zip(other.mean.iter()).any(|(a, b)| *a > b + t)
            || self
                .variance
                .iter()
                .zip(other.variance.iter())
                .any(|(a, b)| *a < b - t);
        weak && strict
    }
}

/// Policies sharing one mean vector.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanClass {
    /// Mean of the first member.
    pub mean: ValueVector,
    /// Indices into the entry list.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierReport {
    pub entries: Vec<FrontierEntry>,
    pub mean_classes: Vec<MeanClass>,
    /// Indices of undominated entries, in entry order.
    pub efficient_set: Vec<usize>,
}

impl FrontierReport {
    pub fn efficient_entries(&self) -> impl Iterator<Item = &FrontierEntry> {
        self.efficient_set.iter().map(|&k| &self.entries[k])
    }
}

/// Mean and variance of every deterministic policy, lexicographically.
pub fn enumerate_all(model: &MdpModel, cap: u128) -> Result<Vec<FrontierEntry>> {
    let count = model.policy_count();
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let policies: Vec<DeterministicPolicy> = model.policies().collect();
    policies
        .into_par_iter()
        .map(|policy| {
            let eval = evaluate(model, &policy)?;
            Ok(FrontierEntry {
                policy,
                mean: eval.mean,
                variance: eval.variance,
            })
        })
        .collect()
}

/// Greedy partition: each entry joins the first class whose representative
/// mean is within `tolerance` in every state.
pub fn mean_classes(entries: &[FrontierEntry], tolerance: f64) -> Vec<MeanClass> {
    let mut classes: Vec<MeanClass> = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|c| c.mean.max_abs_diff(&e.mean) <= tolerance)
        {
            Some(c) => c.members.push(k),
            None => classes.push(MeanClass {
                mean: e.mean.clone(),
                members: vec![k],
            }),
        }
    }
    classes
}

/// Extracts the undominated entries and groups by mean.
pub fn efficient_frontier(entries: Vec<FrontierEntry>, class_tolerance: f64) -> FrontierReport {
    let efficient_set = (0..entries.len())
        .filter(|&k| !entries.iter().any(|o| o.dominates(&entries[k])))
        .collect();
    let mean_classes = mean_classes(&entries, class_tolerance);
    FrontierReport {
        entries,
        mean_classes,
        efficient_set,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constrain::feasible_sets;
    use crate::fixtures::{single_state, two_state_example};
    use crate::generate::{random_model, ModelShape};
    use crate::solve::{brute_force, DEFAULT_CAP};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn by_d(entries: &[FrontierEntry], model: &MdpModel, k: usize) -> usize {
        // d_k in row-major order of (state-1 action, state-2 action).
        let labels = [(k - 1) as u32 / 4 + 1, (k - 1) as u32 % 4 + 1];
        entries
            .iter()
            .position(|e| e.policy.labels(model) == labels)
            .unwrap()
    }

    #[test]
    fn example_frontier() {
        let m = two_state_example();
        let entries = enumerate_all(&m, DEFAULT_CAP).unwrap();
        assert_eq!(entries.len(), 12);
        let report = efficient_frontier(entries, DEFAULT_CLASS_TOLERANCE);
        let eff: Vec<Vec<u32>> = report.efficient_entries().map(|e| e.policy.labels(&m)).collect();
        assert_eq!(eff, vec![vec![1, 2], vec![3, 4]]);
        let e = &report.entries;
        let d = |k| &e[by_d(e, &m, k)];
        assert!(d(2).dominates(d(10)));
        assert!(d(10).dominates(d(6)));
        for k in [4, 9, 11] {
            assert!(d(12).dominates(d(k)));
        }
        for k in [1, 3, 5, 7, 8] {
            assert!(d(4).dominates(d(k)));
        }
        assert!(!d(1).dominates(d(3)) && !d(3).dominates(d(1)));
    }

    #[test]
    fn example_mean_classes() {
        let m = two_state_example();
        let entries = enumerate_all(&m, DEFAULT_CAP).unwrap();
        let classes = mean_classes(&entries, 1e-6);
        let labelled: Vec<Vec<Vec<u32>>> = classes
            .iter()
            .filter(|c| c.members.len() > 1)
            .map(|c| c.members.iter().map(|&k| entries[k].policy.labels(&m)).collect())
            .collect();
        assert_eq!(
            labelled,
            vec![
                vec![vec![1, 1], vec![1, 3], vec![1, 4], vec![2, 1], vec![2, 3], vec![2, 4]],
                vec![vec![2, 2], vec![3, 2]],
            ]
        );
        // Every entry lies in exactly one class.
        let mut seen: Vec<usize> = classes.iter().flat_map(|c| c.members.clone()).collect();
        seen.sort();
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
        let d1 = &entries[0];
        let d3 = &entries[2];
        assert!(d1.variance.max_abs_diff(&d3.variance) < 1e-12);
    }

    #[test]
    fn single_entry_is_its_own_frontier() {
        let m = single_state(1.0, 0.5);
        let entries = enumerate_all(&m, DEFAULT_CAP).unwrap();
        let report = efficient_frontier(entries, DEFAULT_CLASS_TOLERANCE);
        assert_eq!(report.efficient_set, vec![0]);
        assert_eq!(report.mean_classes.len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let m = two_state_example();
        assert!(matches!(
            enumerate_all(&m, 11),
            Err(Error::EnumerationTooLarge { count: 12, cap: 11 })
        ));
    }

    #[test]
    fn frontier_properties_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = ModelShape::new(4, 3);
        for _ in 0..30 {
            let m = random_model(&mut rng, &shape);
            let entries = enumerate_all(&m, DEFAULT_CAP).unwrap();
            assert_eq!(entries.len() as u128, m.policy_count());
            let report = efficient_frontier(entries, DEFAULT_CLASS_TOLERANCE);
            assert!(!report.efficient_set.is_empty());
            let eff: Vec<FrontierEntry> = report.efficient_entries().cloned().collect();
            let again = efficient_frontier(eff.clone(), DEFAULT_CLASS_TOLERANCE);
            assert_eq!(again.efficient_set, (0..eff.len()).collect::<Vec<_>>());

            for class in &report.mean_classes {
                let sets = feasible_sets(&m, &class.mean, 1e-7).unwrap();
                let best = brute_force(&m, &sets, DEFAULT_CAP).unwrap();
                let best = best.optimal().unwrap();
                for &k in &class.members {
                    let v = &report.entries[k].variance;
                    assert!(best.optimal_variance.iter().zip(v.iter()).all(|(b, x)| *b <= x + 1e-10));
                }
            }
        }
    }
}
