//! Variance minimization over the mean-constrained policy set.
//!
//! Within the constrained set every policy has mean `λ`, so the variance is
//! the β²-discounted value of a fixed per-action cost and the problem becomes
//! an ordinary discounted MDP restricted to the feasible actions. Three
//! solvers are provided:
//!
//! * [`policy_iteration`]: improve with the second-moment potential
//!   `g = σ² + λ²` until the policy is stable;
//! * [`value_iteration`]: iterate the optimality equation for `σ²*`;
//! * [`brute_force`]: evaluate every member of the set.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constrain::{enumerate_feasible_policies, FeasibleSets};
use crate::error::{Error, Result};
use crate::evaluate::{
    evaluate, evaluate_randomized, feasibility_gap, potential_g, DEFAULT_FEASIBILITY_TOLERANCE,
};
use crate::linsolve::{solve_discounted, DiscountedSystem};
use crate::model::{induced_chain, DeterministicPolicy, MdpModel, RandomizedPolicy, Role, ValueVector};

/// Scores closer than this to the minimum count as tied.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-10;

/// Default value-iteration accuracy.
pub const DEFAULT_EPSILON: f64 = 1e-10;

/// Default bound on the number of enumerated policies.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// Slack on entrywise variance comparisons in the brute-force search.
pub const DOMINANCE_SLACK: f64 = 1e-10;

/// Hard stop for value iteration.
pub const MAX_VALUE_SWEEPS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PolicyIteration,
    ValueIteration,
    BruteForce,
}

/// One step of a solver run.
///
/// `values` holds `g` for policy iteration, the iterate `V_n` for value
/// iteration and `σ²` of the visited policy for brute force. `scores` is set
/// by policy iteration only: the improvement score of every feasible action,
/// aligned with [`FeasibleSets::per_state`].
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub policy: DeterministicPolicy,
    pub values: ValueVector,
    pub scores: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub method: Method,
    pub optimal_policy: DeterministicPolicy,
    pub optimal_variance: ValueVector,
    pub lambda: ValueVector,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
}

/// Tolerance on `J(d) = λ` implied by the per-action residual tolerance of
/// `sets`: a residual of at most `t` per state moves the mean by at most
/// `t / (1 − β)`.
pub fn mean_tolerance(model: &MdpModel, sets: &FeasibleSets) -> f64 {
    DEFAULT_FEASIBILITY_TOLERANCE.max(sets.tolerance / (1.0 - model.beta()))
}

/// `β² Σ_j p(j|i,a) g(j) + r(i,a)² + 2β r(i,a) Σ_j p(j|i,a) λ(j)` for every
/// feasible action.
pub fn improvement_scores(model: &MdpModel, sets: &FeasibleSets, g: &[f64]) -> Vec<Vec<f64>> {
    let beta = model.beta();
    sets.per_state
        .iter()
        .enumerate()
        .map(|(i, set)| {
            set.iter()
                .map(|&a| {
                    let r = model.reward(i, a);
                    beta * beta * model.expect(i, a, g)
                        + r * r
                        + 2.0 * beta * r * model.expect(i, a, &sets.lambda)
                })
                .collect()
        })
        .collect()
}

/// Argmin with ties broken towards `incumbent`, then towards the smallest
/// label.
fn select(
    model: &MdpModel,
    state: usize,
    candidates: &[usize],
    scores: &[f64],
    incumbent: Option<usize>,
    tie_tolerance: f64,
) -> usize {
    let best = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let tied = |k: usize| scores[k] <= best + tie_tolerance;
    if let Some(inc) = incumbent {
        if let Some(k) = candidates.iter().position(|&a| a == inc) {
            if tied(k) {
                return inc;
            }
        }
    }
    (0..candidates.len())
        .filter(|&k| tied(k))
        .map(|k| candidates[k])
        .min_by_key(|&a| model.label(state, a))
        .expect("nonempty candidate set")
}

/// Policy iteration on the constrained set.
///
/// Each iteration evaluates `g(d)` and picks, per state, the feasible action
/// with the smallest improvement score, keeping the current action whenever
/// it is tied for the minimum. Stops at the first repeated policy; the
/// confirming pass counts as an iteration.
pub fn policy_iteration(
    model: &MdpModel,
    sets: &FeasibleSets,
    initial: Option<&DeterministicPolicy>,
    tie_tolerance: f64,
) -> Result<SolveResult> {
    let mut policy = match initial {
        Some(p) => {
            p.check(model)?;
            if sets.is_empty() {
                return Err(Error::EmptyFeasibleSet {
                    state: sets.first_empty_state().unwrap_or(0),
                });
            }
            if !sets.contains(p) {
                let state = (0..p.len())
                    .find(|&i| !sets.per_state[i].contains(&p.action(i)))
                    .unwrap_or(0);
                return Err(Error::InvalidPolicy {
                    state,
                    reason: "initial action is not in the feasible set".into(),
                });
            }
            p.clone()
        }
        None => sets.first_policy()?,
    };
    let tolerance = mean_tolerance(model, sets);
    let bound = sets.policy_count().min(usize::MAX as u128) as usize;
    let mut trace = Vec::new();
    loop {
        let g = potential_g(model, &policy, &sets.lambda, tolerance)?;
        let scores = improvement_scores(model, sets, &g);
        let next = DeterministicPolicy::new(
            (0..model.num_states())
                .map(|i| {
                    select(
                        model,
                        i,
                        &sets.per_state[i],
                        &scores[i],
                        Some(policy.action(i)),
                        tie_tolerance,
                    )
                })
                .collect(),
        );
        trace.push(IterationRecord {
            policy: policy.clone(),
            values: g,
            scores: Some(scores),
        });
        if next == policy {
            break;
        }
        // Strict descent visits each member at most once, plus the
        // confirming pass.
        if trace.len() > bound {
            return Err(Error::NoConvergence {
                iterations: trace.len(),
            });
        }
        policy = next;
    }
    let optimal_variance = evaluate(model, &policy)?.variance;
    Ok(SolveResult {
        method: Method::PolicyIteration,
        optimal_policy: policy,
        optimal_variance,
        lambda: sets.lambda.clone(),
        iterations: trace.len(),
        trace,
    })
}

/// `h(i,a) = r² + 2βr Σ p λ + β² Σ p λ² − λ(i)²` for every feasible action.
pub fn constrained_variance_rewards(model: &MdpModel, sets: &FeasibleSets) -> Vec<Vec<f64>> {
    let beta = model.beta();
    let lambda = &sets.lambda;
    let sq: Vec<f64> = lambda.iter().map(|v| v * v).collect();
    sets.per_state
        .iter()
        .enumerate()
        .map(|(i, set)| {
            set.iter()
                .map(|&a| {
                    let r = model.reward(i, a);
                    r * r + 2.0 * beta * r * model.expect(i, a, lambda)
                        + beta * beta * model.expect(i, a, &sq)
                        - sq[i]
                })
                .collect()
        })
        .collect()
}

/// One application of the optimality operator
/// `V ↦ min_{a ∈ A_λ(i)} { h(i,a) + β² Σ_j p(j|i,a) V(j) }`.
pub fn variance_bellman_sweep(model: &MdpModel, sets: &FeasibleSets, values: &[f64]) -> Vec<f64> {
    let h = constrained_variance_rewards(model, sets);
    sweep(model, sets, &h, values).0
}

fn sweep(
    model: &MdpModel,
    sets: &FeasibleSets,
    h: &[Vec<f64>],
    values: &[f64],
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let b2 = model.beta() * model.beta();
    let q: Vec<Vec<f64>> = sets
        .per_state
        .iter()
        .enumerate()
        .map(|(i, set)| {
            set.iter()
                .enumerate()
                .map(|(k, &a)| h[i][k] + b2 * model.expect(i, a, values))
                .collect()
        })
        .collect();
    let next = q
        .iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    (next, q)
}

/// Value iteration from `V₀ = 0`.
pub fn value_iteration(
    model: &MdpModel,
    sets: &FeasibleSets,
    epsilon: f64,
    tie_tolerance: f64,
) -> Result<SolveResult> {
    value_iteration_from(model, sets, epsilon, tie_tolerance, None)
}

/// Value iteration with an optional starting vector.
///
/// Stops once `‖V_{n+1} − V_n‖∞ ≤ ε(1 − β²)/(2β²)`, which places the greedy
/// policy's variance within `ε` of the optimum. The returned variance is
/// the exact evaluation of that greedy policy.
pub fn value_iteration_from(
    model: &MdpModel,
    sets: &FeasibleSets,
    epsilon: f64,
    tie_tolerance: f64,
    initial: Option<&[f64]>,
) -> Result<SolveResult> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if let Some(state) = sets.first_empty_state() {
        return Err(Error::EmptyFeasibleSet { state });
    }
    let s = model.num_states();
    let mut values = match initial {
        Some(v) if v.len() != s => {
            return Err(Error::DimensionMismatch {
                context: "initial values",
                expected: s,
                found: v.len(),
            })
        }
        Some(v) => v.to_vec(),
        None => vec![0.0; s],
    };
    let b2 = model.beta() * model.beta();
    let threshold = epsilon * (1.0 - b2) / (2.0 * b2);
    let h = constrained_variance_rewards(model, sets);
    let greedy = |q: &[Vec<f64>]| {
        DeterministicPolicy::new(
            (0..s)
                .map(|i| select(model, i, &sets.per_state[i], &q[i], None, tie_tolerance))
                .collect(),
        )
    };
    let mut trace = Vec::new();
    loop {
        let (next, q) = sweep(model, sets, &h, &values);
        let delta = next
            .iter()
            .zip(&values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let policy = greedy(&q);
        trace.push(IterationRecord {
            policy,
            values: ValueVector::new(Role::Variance, next.clone()),
            scores: None,
        });
        values = next;
        if delta <= threshold {
            break;
        }
        if trace.len() >= MAX_VALUE_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: trace.len(),
            });
        }
    }
    // Greedy with respect to the final iterate.
    let (_, q) = sweep(model, sets, &h, &values);
    let policy = greedy(&q);
    let eval = evaluate(model, &policy)?;
    feasibility_gap(&eval.mean, &sets.lambda, mean_tolerance(model, sets))?;
    Ok(SolveResult {
        method: Method::ValueIteration,
        optimal_policy: policy,
        optimal_variance: eval.variance,
        lambda: sets.lambda.clone(),
        iterations: trace.len(),
        trace,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum BruteForceOutcome {
    /// A member whose variance is entrywise minimal, together with every
    /// member sharing that variance (the optimum included).
    Optimal {
        result: SolveResult,
        co_optimal: Vec<DeterministicPolicy>,
    },
    /// No member dominates; the members not dominated under entrywise
    /// variance minimization.
    NoDominator {
        pareto: Vec<(DeterministicPolicy, ValueVector)>,
    },
}

impl BruteForceOutcome {
    pub fn optimal(&self) -> Option<&SolveResult> {
        match self {
            BruteForceOutcome::Optimal { result, .. } => Some(result),
            BruteForceOutcome::NoDominator { .. } => None,
        }
    }
}

/// Evaluates every member of the constrained set.
pub fn brute_force(model: &MdpModel, sets: &FeasibleSets, cap: u128) -> Result<BruteForceOutcome> {
    let count = sets.policy_count();
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let members: Vec<DeterministicPolicy> = enumerate_feasible_policies(sets)?.collect();
    let variances = members
        .par_iter()
        .map(|p| evaluate(model, p).map(|e| e.variance))
        .collect::<Result<Vec<_>>>()?;
    let s = model.num_states();
    let floor: Vec<f64> = (0..s)
        .map(|i| variances.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let trace: Vec<IterationRecord> = members
        .iter()
        .zip(&variances)
        .map(|(p, v)| IterationRecord {
            policy: p.clone(),
            values: v.clone(),
            scores: None,
        })
        .collect();
    let hits_floor = |v: &ValueVector| v.iter().zip(&floor).all(|(x, m)| *x <= m + DOMINANCE_SLACK);
    match variances.iter().position(hits_floor) {
        Some(k) => {
            let co_optimal = members
                .iter()
                .zip(&variances)
                .filter(|(_, v)| hits_floor(v))
                .map(|(p, _)| p.clone())
                .collect();
            Ok(BruteForceOutcome::Optimal {
                result: SolveResult {
                    method: Method::BruteForce,
                    optimal_policy: members[k].clone(),
                    optimal_variance: variances[k].clone(),
                    lambda: sets.lambda.clone(),
                    iterations: trace.len(),
                    trace,
                },
                co_optimal,
            })
        }
        None => {
            let dominated = |a: &ValueVector, b: &ValueVector| {
                b.iter().zip(a.iter()).all(|(y, x)| *y <= x + DOMINANCE_SLACK)
                    && b.iter().zip(a.iter()).any(|(y, x)| *y < x - DOMINANCE_SLACK)
            };
            let pareto = members
                .iter()
                .zip(&variances)
                .filter(|(_, v)| !variances.iter().any(|w| dominated(v, w)))
                .map(|(p, v)| (p.clone(), v.clone()))
                .collect();
            Ok(BruteForceOutcome::NoDominator { pareto })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomizedViolationKind {
    Mean,
    Variance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizedViolation {
    pub sample: usize,
    pub state: usize,
    pub kind: RandomizedViolationKind,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizedCheckReport {
    pub samples: usize,
    pub seed: u64,
    pub mean_tolerance: f64,
    pub variance_slack: f64,
    pub max_mean_deviation: f64,
    /// `min over samples and states of σ²(d^θ, i) − σ²*(i)`.
    pub min_variance_margin: f64,
    pub violations: Vec<RandomizedViolation>,
}

/// Slack below the deterministic optimum tolerated for a mixture's variance.
pub const RANDOMIZED_VARIANCE_SLACK: f64 = 1e-8;

/// Samples flat-Dirichlet mixtures over the feasible sets and checks that
/// each keeps the mean at `λ` and never beats `result`'s variance.
pub fn check_randomized_dominance(
    model: &MdpModel,
    sets: &FeasibleSets,
    result: &SolveResult,
    num_samples: usize,
    seed: u64,
) -> Result<RandomizedCheckReport> {
    if num_samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    if let Some(state) = sets.first_empty_state() {
        return Err(Error::EmptyFeasibleSet { state });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean_tol = mean_tolerance(model, sets);
    let mut report = RandomizedCheckReport {
        samples: num_samples,
        seed,
        mean_tolerance: mean_tol,
        variance_slack: RANDOMIZED_VARIANCE_SLACK,
        max_mean_deviation: 0.0,
        min_variance_margin: f64::INFINITY,
        violations: Vec::new(),
    };
    for sample in 0..num_samples {
        let theta = RandomizedPolicy::sample_dirichlet(&mut rng, &sets.per_state);
        let eval = evaluate_randomized(model, &theta)?;
        for i in 0..model.num_states() {
            let dev = (eval.mean[i] - sets.lambda[i]).abs();
            report.max_mean_deviation = report.max_mean_deviation.max(dev);
            if dev > mean_tol {
                report.violations.push(RandomizedViolation {
                    sample,
                    state: i,
                    kind: RandomizedViolationKind::Mean,
                    value: eval.mean[i],
                    bound: sets.lambda[i],
                });
            }
            let margin = eval.variance[i] - result.optimal_variance[i];
            report.min_variance_margin = report.min_variance_margin.min(margin);
            if margin < -RANDOMIZED_VARIANCE_SLACK {
                report.violations.push(RandomizedViolation {
                    sample,
                    state: i,
                    kind: RandomizedViolationKind::Variance,
                    value: eval.variance[i],
                    bound: result.optimal_variance[i],
                });
            }
        }
    }
    Ok(report)
}

/// Entrywise descent check for the policy-iteration trace: returns the
/// largest increase `σ²(d^(k+1)) − σ²(d^(k))` seen across consecutive
/// iterates, and whether every changed step strictly decreased some state.
pub fn descent_profile(model: &MdpModel, result: &SolveResult) -> Result<(f64, bool)> {
    let mut worst = f64::NEG_INFINITY;
    let mut strict = true;
    for pair in result.trace.windows(2) {
        let a = evaluate(model, &pair[0].policy)?.variance;
        let b = evaluate(model, &pair[1].policy)?.variance;
        let diffs: Vec<f64> = b.iter().zip(a.iter()).map(|(y, x)| y - x).collect();
        worst = diffs.iter().copied().fold(worst, f64::max);
        if pair[0].policy != pair[1].policy && !diffs.iter().any(|&d| d < 0.0) {
            strict = false;
        }
    }
    Ok((worst.max(0.0), strict))
}

/// Variance difference between two members of the constrained set via
/// `(I − β²P′)⁻¹[β²(P′ − P)g + f′ − f]`.
pub fn variance_difference(
    model: &MdpModel,
    lambda: &[f64],
    from: &DeterministicPolicy,
    to: &DeterministicPolicy,
) -> Result<Vec<f64>> {
    let beta = model.beta();
    let b2 = beta * beta;
    let eval = evaluate(model, from)?;
    let g: Vec<f64> = eval
        .variance
        .iter()
        .zip(lambda)
        .map(|(v, l)| v + l * l)
        .collect();
    let c = induced_chain(model, from)?;
    let c2 = induced_chain(model, to)?;
    let f = |chain: &crate::model::InducedChain, i: usize| {
        let r = chain.reward[i];
        let pl: f64 = chain.transition.row(i).iter().zip(lambda).map(|(p, l)| p * l).sum();
        r * r + 2.0 * beta * r * pl
    };
    let pg = c.transition.mul_vec(&g);
    let p2g = c2.transition.mul_vec(&g);
    let rhs: Vec<f64> = (0..model.num_states())
        .map(|i| b2 * (p2g[i] - pg[i]) + f(&c2, i) - f(&c, i))
        .collect();
    solve_discounted(&DiscountedSystem::new(&c2.transition, b2, &rhs))
}
