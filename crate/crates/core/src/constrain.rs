//! The mean-constrained policy set.
//!
//! A policy has mean vector `λ` exactly when every action it plays satisfies
//! the one-step consistency equation
//!
//! ```text
//! r(i,a) + β Σ_j p(j|i,a) λ(j) = λ(i)
//! ```
//!
//! so the constrained set is the Cartesian product of the per-state sets of
//! actions passing this test.

use crate::error::{Error, Result};
use crate::evaluate::mean_performance;
use crate::model::{ActionLabel, DeterministicPolicy, MdpModel, PolicyEnumerator, ValueVector};

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibleSets {
    /// Action indices per state, ordered by label.
    pub per_state: Vec<Vec<usize>>,
    pub lambda: ValueVector,
    pub tolerance: f64,
}

impl FeasibleSets {
    pub fn first_empty_state(&self) -> Option<usize> {
        self.per_state.iter().position(|s| s.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.first_empty_state().is_some()
    }

    /// `Π_i |A_λ(i)|`, saturating.
    pub fn policy_count(&self) -> u128 {
        PolicyEnumerator::total(&self.per_state)
    }

    pub fn contains(&self, policy: &DeterministicPolicy) -> bool {
        policy.len() == self.per_state.len()
            && policy
                .indices()
                .iter()
                .zip(&self.per_state)
                .all(|(a, set)| set.contains(a))
    }

    pub fn labels(&self, model: &MdpModel) -> Vec<Vec<ActionLabel>> {
        self.per_state
            .iter()
            .enumerate()
            .map(|(i, set)| set.iter().map(|&a| model.label(i, a)).collect())
            .collect()
    }

    /// The lexicographically smallest member, by label.
    pub fn first_policy(&self) -> Result<DeterministicPolicy> {
        if let Some(state) = self.first_empty_state() {
            return Err(Error::EmptyFeasibleSet { state });
        }
        Ok(DeterministicPolicy::new(
            self.per_state.iter().map(|s| s[0]).collect(),
        ))
    }
}

/// `r(i,a) + β Σ_j p(j|i,a) λ(j) − λ(i)`.
pub fn consistency_residual(model: &MdpModel, state: usize, action: usize, lambda: &[f64]) -> f64 {
    model.reward(state, action) + model.beta() * model.expect(state, action, lambda) - lambda[state]
}

pub fn feasible_sets(model: &MdpModel, lambda: &[f64], tolerance: f64) -> Result<FeasibleSets> {
    if lambda.len() != model.num_states() {
        return Err(Error::DimensionMismatch {
            context: "lambda",
            expected: model.num_states(),
            found: lambda.len(),
        });
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "feasibility tolerance must be positive, got {tolerance}"
        )));
    }
    let per_state = (0..model.num_states())
        .map(|i| {
            let mut set: Vec<usize> = (0..model.num_actions(i))
                .filter(|&a| consistency_residual(model, i, a, lambda).abs() <= tolerance)
                .collect();
            set.sort_by_key(|&a| model.label(i, a));
            set
        })
        .collect();
    Ok(FeasibleSets {
        per_state,
        lambda: ValueVector::target(lambda.to_vec()),
        tolerance,
    })
}

/// Streams every member of the constrained set in lexicographic label order.
pub fn enumerate_feasible_policies(sets: &FeasibleSets) -> Result<PolicyEnumerator> {
    if let Some(state) = sets.first_empty_state() {
        return Err(Error::EmptyFeasibleSet { state });
    }
    Ok(PolicyEnumerator::new(sets.per_state.clone()))
}

/// `‖J(d) − λ‖∞ ≤ tolerance`.
pub fn verify_membership(
    model: &MdpModel,
    policy: &DeterministicPolicy,
    lambda: &[f64],
    tolerance: f64,
) -> Result<bool> {
    let mean = mean_performance(model, policy)?;
    Ok(lambda.len() == mean.len() && mean.max_abs_diff(lambda) <= tolerance)
}
