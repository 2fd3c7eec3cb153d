//! Tabular MDP data model, policies and model validation.
//!
//! Actions are addressed internally by dense 0-based indices into each
//! state's action list. The positive integer labels of the model file are
//! kept alongside for reporting and for building policies from user input.

use std::fmt;
use std::ops::Deref;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linsolve::Matrix;

/// Absolute tolerance on every transition row sum.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-12;

/// Tolerance on the weights of a randomized policy.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// How many policies `validate_model` inspects for irreducibility.
pub const ERGODICITY_SAMPLE: usize = 64;

pub type ActionLabel = u32;

/// One action available at a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub label: ActionLabel,
    pub reward: f64,
    /// `transition[j]` is the probability of moving to state `j`.
    pub transition: Vec<f64>,
}

impl Action {
    pub fn new(label: ActionLabel, reward: f64, transition: Vec<f64>) -> Self {
        Action {
            label,
            reward,
            transition,
        }
    }
}

/// A finite discounted MDP.
///
/// Construction does not validate; run [`validate_model`] (the model file
/// parser does this automatically).
#[derive(Clone, Debug, PartialEq)]
pub struct MdpModel {
    beta: f64,
    states: Vec<Vec<Action>>,
}

impl MdpModel {
    pub fn new(beta: f64, states: Vec<Vec<Action>>) -> Self {
        MdpModel { beta, states }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self, state: usize) -> usize {
        self.states[state].len()
    }

    pub fn actions(&self, state: usize) -> &[Action] {
        &self.states[state]
    }

    pub fn action(&self, state: usize, action: usize) -> &Action {
        &self.states[state][action]
    }

    pub fn reward(&self, state: usize, action: usize) -> f64 {
        self.states[state][action].reward
    }

    pub fn transition(&self, state: usize, action: usize) -> &[f64] {
        &self.states[state][action].transition
    }

    pub fn label(&self, state: usize, action: usize) -> ActionLabel {
        self.states[state][action].label
    }

    /// Dense index of the action carrying `label` at `state`.
    pub fn action_index(&self, state: usize, label: ActionLabel) -> Option<usize> {
        self.states
            .get(state)?
            .iter()
            .position(|a| a.label == label)
    }

    /// `Σ_j p(j|i,a) v(j)`.
    pub fn expect(&self, state: usize, action: usize, values: &[f64]) -> f64 {
        self.transition(state, action)
            .iter()
            .zip(values)
            .map(|(p, v)| p * v)
            .sum()
    }

    /// Number of deterministic stationary policies, saturating.
    pub fn policy_count(&self) -> u128 {
        self.states
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128))
    }

    /// Iterates over every deterministic policy in lexicographic order.
    pub fn policies(&self) -> PolicyEnumerator {
        PolicyEnumerator::new(self.states.iter().map(|a| (0..a.len()).collect()).collect())
    }
}

/// A deterministic stationary policy, stored as one action index per state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicPolicy(Vec<usize>);

impl DeterministicPolicy {
    /// Wraps raw action indices without checking them against a model.
    pub fn new(indices: Vec<usize>) -> Self {
        DeterministicPolicy(indices)
    }

    /// Builds a policy from action labels, one per state.
    pub fn from_labels(model: &MdpModel, labels: &[ActionLabel]) -> Result<Self> {
        if labels.len() != model.num_states() {
            return Err(Error::DimensionMismatch {
                context: "policy labels",
                expected: model.num_states(),
                found: labels.len(),
            });
        }
        labels
            .iter()
            .enumerate()
            .map(|(state, &label)| {
                model
                    .action_index(state, label)
                    .ok_or_else(|| Error::InvalidPolicy {
                        state,
                        reason: format!("action {label} is not available"),
                    })
            })
            .collect::<Result<Vec<_>>>()
            .map(DeterministicPolicy)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn action(&self, state: usize) -> usize {
        self.0[state]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self, model: &MdpModel) -> Vec<ActionLabel> {
        self.0
            .iter()
            .enumerate()
            .map(|(state, &a)| model.label(state, a))
            .collect()
    }

    pub fn check(&self, model: &MdpModel) -> Result<()> {
        if self.0.len() != model.num_states() {
            return Err(Error::DimensionMismatch {
                context: "policy",
                expected: model.num_states(),
                found: self.0.len(),
            });
        }
        for (state, &a) in self.0.iter().enumerate() {
            if a >= model.num_actions(state) {
                return Err(Error::InvalidPolicy {
                    state,
                    reason: format!("action index {a} is out of range"),
                });
            }
        }
        Ok(())
    }
}

/// A stationary randomized policy: per state, a list of
/// `(action index, probability)` pairs over a support set.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedPolicy(Vec<Vec<(usize, f64)>>);

impl RandomizedPolicy {
    pub fn new(weights: Vec<Vec<(usize, f64)>>) -> Self {
        RandomizedPolicy(weights)
    }

    /// The degenerate mixture that always plays `policy`.
    pub fn point_mass(policy: &DeterministicPolicy) -> Self {
        RandomizedPolicy(policy.indices().iter().map(|&a| vec![(a, 1.0)]).collect())
    }

    /// Uniform weights over each state's support.
    pub fn uniform(support: &[Vec<usize>]) -> Self {
        RandomizedPolicy(
            support
                .iter()
                .map(|acts| {
                    let w = 1.0 / acts.len() as f64;
                    acts.iter().map(|&a| (a, w)).collect()
                })
                .collect(),
        )
    }

    /// Independent flat-Dirichlet weights over each state's support.
    pub fn sample_dirichlet<R: Rng>(rng: &mut R, support: &[Vec<usize>]) -> Self {
        RandomizedPolicy(
            support
                .iter()
                .map(|acts| {
                    // Exponential(1) draws normalized to the simplex.
                    let raw: Vec<f64> = acts
                        .iter()
                        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                        .collect();
                    let total: f64 = raw.iter().sum();
                    if total > 0.0 {
                        acts.iter().zip(raw).map(|(&a, e)| (a, e / total)).collect()
                    } else {
                        let w = 1.0 / acts.len() as f64;
                        acts.iter().map(|&a| (a, w)).collect()
                    }
                })
                .collect(),
        )
    }

    pub fn weights(&self, state: usize) -> &[(usize, f64)] {
        &self.0[state]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, model: &MdpModel) -> Result<()> {
        if self.0.len() != model.num_states() {
            return Err(Error::DimensionMismatch {
                context: "randomized policy",
                expected: model.num_states(),
                found: self.0.len(),
            });
        }
        for (state, weights) in self.0.iter().enumerate() {
            let mut total = 0.0;
            for &(a, w) in weights {
                if a >= model.num_actions(state) {
                    return Err(Error::InvalidPolicy {
                        state,
                        reason: format!("action index {a} is out of range"),
                    });
                }
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidPolicy {
                        state,
                        reason: format!("weight {w} lies outside [0, 1]"),
                    });
                }
                total += w;
            }
            if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
                return Err(Error::InvalidPolicy {
                    state,
                    reason: format!("weights sum to {total}"),
                });
            }
        }
        Ok(())
    }
}

/// What a [`ValueVector`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Mean,
    Target,
    Variance,
    RewardH,
    RewardF,
    Potential,
}

/// An S-dimensional vector tagged with its role.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueVector {
    pub role: Role,
    pub values: Vec<f64>,
}

impl ValueVector {
    pub fn new(role: Role, values: Vec<f64>) -> Self {
        ValueVector { role, values }
    }

    pub fn target(values: Vec<f64>) -> Self {
        ValueVector::new(Role::Target, values)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }

    /// `max_i |self(i) - other(i)|`.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Deref for ValueVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

/// The chain a deterministic or randomized policy induces.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedChain {
    pub transition: Matrix,
    pub reward: Vec<f64>,
}

pub fn induced_chain(model: &MdpModel, policy: &DeterministicPolicy) -> Result<InducedChain> {
    policy.check(model)?;
    let rows = (0..model.num_states())
        .map(|i| model.transition(i, policy.action(i)).to_vec())
        .collect();
    let reward = (0..model.num_states())
        .map(|i| model.reward(i, policy.action(i)))
        .collect();
    Ok(InducedChain {
        transition: Matrix::from_rows(rows),
        reward,
    })
}

pub fn induced_chain_randomized(
    model: &MdpModel,
    policy: &RandomizedPolicy,
) -> Result<InducedChain> {
    policy.check(model)?;
    let s = model.num_states();
    let mut rows = vec![vec![0.0; s]; s];
    let mut reward = vec![0.0; s];
    for (i, row) in rows.iter_mut().enumerate() {
        for &(a, w) in policy.weights(i) {
            for (dst, p) in row.iter_mut().zip(model.transition(i, a)) {
                *dst += w * p;
            }
            reward[i] += w * model.reward(i, a);
        }
    }
    Ok(InducedChain {
        transition: Matrix::from_rows(rows),
        reward,
    })
}

/// A broken model invariant. States are 0-based; labels are as in the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoStates,
    NoActions {
        state: usize,
    },
    DiscountOutOfRange {
        beta: f64,
    },
    StateCount {
        declared: usize,
        found: usize,
    },
    ZeroLabel {
        state: usize,
    },
    DuplicateLabel {
        state: usize,
        label: ActionLabel,
    },
    TransitionLength {
        state: usize,
        label: ActionLabel,
        expected: usize,
        found: usize,
    },
    ProbabilityOutOfRange {
        state: usize,
        label: ActionLabel,
        next: usize,
        value: f64,
    },
    RowSum {
        state: usize,
        label: ActionLabel,
        sum: f64,
    },
    NonFiniteReward {
        state: usize,
        label: ActionLabel,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "model has no states"),
            Violation::NoActions { state } => write!(f, "state {} has no actions", state + 1),
            Violation::DiscountOutOfRange { beta } => {
                write!(f, "discount factor must lie in (0,1), got {beta}")
            }
            Violation::StateCount { declared, found } => write!(
                f,
                "num_states is {declared} but {found} state entries are present"
            ),
            Violation::ZeroLabel { state } => {
                write!(f, "state {} uses action label 0; labels must be positive", state + 1)
            }
            Violation::DuplicateLabel { state, label } => {
                write!(f, "state {} lists action {label} more than once", state + 1)
            }
            Violation::TransitionLength {
                state,
                label,
                expected,
                found,
            } => write!(
                f,
                "transition of state {} action {label} has {found} entries, expected {expected}",
                state + 1
            ),
            Violation::ProbabilityOutOfRange {
                state,
                label,
                next,
                value,
            } => write!(
                f,
                "p({}|{},{label}) = {value} is outside [0,1]",
                next + 1,
                state + 1
            ),
            Violation::RowSum { state, label, sum } => write!(
                f,
                "transition row of state {} action {label} sums to {sum}, not 1",
                state + 1
            ),
            Violation::NonFiniteReward { state, label } => {
                write!(f, "reward of state {} action {label} is not finite", state + 1)
            }
        }
    }
}

/// Non-fatal findings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// The chain of this policy (given by labels) is not irreducible.
    Reducible { policy: Vec<ActionLabel> },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Reducible { policy } => {
                let labels: Vec<String> = policy.iter().map(|l| l.to_string()).collect();
                write!(
                    f,
                    "chain under policy ({}) is not irreducible",
                    labels.join(",")
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of `model`, then inspects the first
/// [`ERGODICITY_SAMPLE`] policies (lexicographic order) for irreducibility.
pub fn validate_model(model: &MdpModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let s = model.num_states();
    if s == 0 {
        report.violations.push(Violation::NoStates);
    }
    if !(model.beta > 0.0 && model.beta < 1.0) {
        report
            .violations
            .push(Violation::DiscountOutOfRange { beta: model.beta });
    }
    for (state, actions) in model.states.iter().enumerate() {
        if actions.is_empty() {
            report.violations.push(Violation::NoActions { state });
        }
        for (k, action) in actions.iter().enumerate() {
            let label = action.label;
            if label == 0 {
                report.violations.push(Violation::ZeroLabel { state });
            }
            if actions[..k].iter().any(|a| a.label == label) {
                report
                    .violations
                    .push(Violation::DuplicateLabel { state, label });
            }
            if !action.reward.is_finite() {
                report
                    .violations
                    .push(Violation::NonFiniteReward { state, label });
            }
            if action.transition.len() != s {
                report.violations.push(Violation::TransitionLength {
                    state,
                    label,
                    expected: s,
                    found: action.transition.len(),
                });
                continue;
            }
            let mut sum = 0.0;
            for (next, &p) in action.transition.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    report.violations.push(Violation::ProbabilityOutOfRange {
                        state,
                        label,
                        next,
                        value: p,
                    });
                }
                sum += p;
            }
            if sum.is_nan() || (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
                report
                    .violations
                    .push(Violation::RowSum { state, label, sum });
            }
        }
    }
    if report.violations.is_empty() {
        for policy in model.policies().take(ERGODICITY_SAMPLE) {
            if let Some(w) = irreducibility_warning(model, &policy) {
                report.warnings.push(w);
            }
        }
    }
    report
}

/// A warning if the chain induced by `policy` is not irreducible.
pub fn irreducibility_warning(model: &MdpModel, policy: &DeterministicPolicy) -> Option<Warning> {
    let chain = induced_chain(model, policy).ok()?;
    if is_irreducible(&chain.transition) {
        None
    } else {
        Some(Warning::Reducible {
            policy: policy.labels(model),
        })
    }
}

/// Strong connectivity of the support graph `{(i,j) : P[i][j] > 0}`.
#[allow(clippy::needless_range_loop)]
pub fn is_irreducible(p: &Matrix) -> bool {
    let n = p.size();
    if n == 0 {
        return true;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let w = if forward { p.get(u, v) } else { p.get(v, u) };
                if w > 0.0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|x| x)
    };
    reach(true) && reach(false)
}

/// Lexicographic enumeration of the Cartesian product of per-state action
/// lists. The last state varies fastest.
#[derive(Clone, Debug)]
pub struct PolicyEnumerator {
    choices: Vec<Vec<usize>>,
    cursor: Option<Vec<usize>>,
}

impl PolicyEnumerator {
    pub fn new(choices: Vec<Vec<usize>>) -> Self {
        let cursor = if choices.iter().any(|c| c.is_empty()) {
            None
        } else {
            Some(vec![0; choices.len()])
        };
        PolicyEnumerator { choices, cursor }
    }

    pub fn total(choices: &[Vec<usize>]) -> u128 {
        choices
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }
}

impl Iterator for PolicyEnumerator {
    type Item = DeterministicPolicy;

    fn next(&mut self) -> Option<DeterministicPolicy> {
        let cursor = self.cursor.as_mut()?;
        let policy = DeterministicPolicy(
            cursor
                .iter()
                .zip(&self.choices)
                .map(|(&k, c)| c[k])
                .collect(),
        );
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                self.cursor = None;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < self.choices[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        Some(policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{two_state_example, single_state};

    #[test]
    fn example_model_is_valid() {
        let report = validate_model(&two_state_example());
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn smallest_legal_model_is_valid() {
        let report = validate_model(&single_state(1.0, 0.5));
        assert!(report.violations.is_empty());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn row_sum_violation_is_reported() {
        let model = MdpModel::new(
            0.5,
            vec![
                vec![Action::new(1, 0.0, vec![0.6, 0.5])],
                vec![Action::new(1, 0.0, vec![0.5, 0.5])],
            ],
        );
        let report = validate_model(&model);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(
            report.violations[0],
            Violation::RowSum { state: 0, label: 1, .. }
        ));
    }

    #[test]
    fn discount_and_probability_violations() {
        let model = MdpModel::new(1.0, vec![vec![Action::new(1, 1.0, vec![1.0])]]);
        let report = validate_model(&model);
        assert_eq!(
            report.violations,
            vec![Violation::DiscountOutOfRange { beta: 1.0 }]
        );
        assert!(report.violations[0]
            .to_string()
            .contains("discount factor must lie in (0,1)"));

        let model = MdpModel::new(
            0.5,
            vec![
                vec![Action::new(1, 0.0, vec![-0.5, 1.5])],
                vec![],
            ],
        );
        let report = validate_model(&model);
        assert!(report.violations.contains(&Violation::NoActions { state: 1 }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ProbabilityOutOfRange { next: 0, .. })));
    }

    #[test]
    fn perturbed_probability_breaks_validation() {
        let base = two_state_example();
        for i in 0..base.num_states() {
            for a in 0..base.num_actions(i) {
                let mut states: Vec<Vec<Action>> =
                    (0..base.num_states()).map(|s| base.actions(s).to_vec()).collect();
                let row = &mut states[i][a].transition;
                let j = if row[0] < row[1] { 0 } else { 1 };
                row[j] += 1e-9;
                let report = validate_model(&MdpModel::new(base.beta(), states));
                assert_eq!(report.violations.len(), 1);
            }
        }
    }

    #[test]
    fn reducible_chain_gives_warning_not_violation() {
        let model = MdpModel::new(
            0.5,
            vec![
                vec![Action::new(1, 1.0, vec![1.0, 0.0])],
                vec![Action::new(1, 1.0, vec![0.0, 1.0])],
            ],
        );
        let report = validate_model(&model);
        assert!(report.is_valid());
        assert_eq!(
            report.warnings,
            vec![Warning::Reducible { policy: vec![1, 1] }]
        );
    }

    #[test]
    fn induced_chain_of_example_policies() {
        let model = two_state_example();
        let d5 = DeterministicPolicy::from_labels(&model, &[2, 1]).unwrap();
        let chain = induced_chain(&model, &d5).unwrap();
        assert_eq!(chain.transition.row(0), &[0.5, 0.5]);
        assert_eq!(chain.transition.row(1), &[0.25, 0.75]);
        assert_eq!(chain.reward, vec![0.75, 2.5]);

        let d1 = DeterministicPolicy::from_labels(&model, &[1, 1]).unwrap();
        assert_eq!(induced_chain(&model, &d1).unwrap().reward, vec![1.0, 2.5]);

        let single = single_state(3.0, 0.5);
        let chain = induced_chain(&single, &DeterministicPolicy::new(vec![0])).unwrap();
        assert_eq!(chain.transition.row(0), &[1.0]);
        assert_eq!(chain.reward, vec![3.0]);
    }

    #[test]
    fn invalid_policy_is_rejected() {
        let model = two_state_example();
        assert!(matches!(
            DeterministicPolicy::from_labels(&model, &[4, 1]),
            Err(Error::InvalidPolicy { state: 0, .. })
        ));
        assert!(matches!(
            induced_chain(&model, &DeterministicPolicy::new(vec![0, 4])),
            Err(Error::InvalidPolicy { state: 1, .. })
        ));
    }

    #[test]
    fn randomized_chain_mixes_rows_and_rewards() {
        let model = two_state_example();
        let theta = RandomizedPolicy::new(vec![
            vec![(0, 0.5), (1, 0.5)],
            vec![(0, 1.0 / 3.0), (2, 1.0 / 3.0), (3, 1.0 / 3.0)],
        ]);
        let chain = induced_chain_randomized(&model, &theta).unwrap();
        assert!((chain.transition.get(0, 1) - 0.375).abs() < 1e-15);
        assert!((chain.reward[0] - 0.875).abs() < 1e-15);
        assert!((chain.reward[1] - 2.9167).abs() < 5e-5);
        for i in 0..2 {
            let sum: f64 = chain.transition.row(i).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn point_mass_matches_deterministic_exactly() {
        let model = two_state_example();
        for policy in model.policies() {
            let det = induced_chain(&model, &policy).unwrap();
            let rnd = induced_chain_randomized(&model, &RandomizedPolicy::point_mass(&policy))
                .unwrap();
            assert_eq!(det, rnd);
        }
    }

    #[test]
    fn bad_simplex_weights_are_rejected() {
        let model = two_state_example();
        let theta = RandomizedPolicy::new(vec![vec![(0, 0.5), (1, 0.4)], vec![(0, 1.0)]]);
        assert!(matches!(
            induced_chain_randomized(&model, &theta),
            Err(Error::InvalidPolicy { state: 0, .. })
        ));
    }

    #[test]
    fn enumerator_is_lexicographic_and_complete() {
        let model = two_state_example();
        let all: Vec<Vec<ActionLabel>> = model.policies().map(|p| p.labels(&model)).collect();
        assert_eq!(all.len(), 12);
        assert_eq!(all[0], vec![1, 1]);
        assert_eq!(all[1], vec![1, 2]);
        assert_eq!(all[4], vec![2, 1]);
        assert_eq!(all[11], vec![3, 4]);
        assert_eq!(PolicyEnumerator::new(vec![vec![0], vec![]]).count(), 0);
    }
}
