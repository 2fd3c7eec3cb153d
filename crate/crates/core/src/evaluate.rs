//! Closed-form mean and variance of the total discounted reward.
//!
//! The variance of a β-discounted chain is itself the mean discounted
//! performance of the same chain under discount β² and the reward
//!
//! ```text
//! h = r² + 2β r ⊙ (P J) + β² P J² − J²        (squares componentwise)
//! ```
//!
//! so `σ² = (I − β²P)⁻¹ h`. Equivalently `σ² = (I − β²P)⁻¹ f − J²` with
//! `f = r² + 2β r ⊙ (P J)`.

use crate::error::{Error, Result};
use crate::linsolve::{solve_discounted, DiscountedSystem};
use crate::model::{
    induced_chain, induced_chain_randomized, DeterministicPolicy, InducedChain, MdpModel,
    RandomizedPolicy, Role, ValueVector,
};

/// Absolute per-state tolerance for `J(d) = λ`.
pub const DEFAULT_FEASIBILITY_TOLERANCE: f64 = 1e-7;

/// Mean and variance of one policy.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub mean: ValueVector,
    pub variance: ValueVector,
}

fn check_len(model: &MdpModel, v: &[f64], context: &'static str) -> Result<()> {
    if v.len() != model.num_states() {
        return Err(Error::DimensionMismatch {
            context,
            expected: model.num_states(),
            found: v.len(),
        });
    }
    Ok(())
}

fn chain_mean(chain: &InducedChain, beta: f64) -> Result<Vec<f64>> {
    solve_discounted(&DiscountedSystem::new(&chain.transition, beta, &chain.reward))
}

/// `J = (I − βP(d))⁻¹ r(d)`.
pub fn mean_performance(model: &MdpModel, policy: &DeterministicPolicy) -> Result<ValueVector> {
    let chain = induced_chain(model, policy)?;
    Ok(ValueVector::new(Role::Mean, chain_mean(&chain, model.beta())?))
}

fn chain_h(chain: &InducedChain, beta: f64, mean: &[f64]) -> Vec<f64> {
    let sq: Vec<f64> = mean.iter().map(|v| v * v).collect();
    let pj = chain.transition.mul_vec(mean);
    let pj2 = chain.transition.mul_vec(&sq);
    chain
        .reward
        .iter()
        .enumerate()
        .map(|(i, r)| r * r + 2.0 * beta * r * pj[i] + beta * beta * pj2[i] - sq[i])
        .collect()
}

/// The variance reward `h` for `policy`, given its mean vector `mean`.
pub fn new_reward_h(
    model: &MdpModel,
    policy: &DeterministicPolicy,
    mean: &[f64],
) -> Result<ValueVector> {
    check_len(model, mean, "mean vector")?;
    let chain = induced_chain(model, policy)?;
    Ok(ValueVector::new(
        Role::RewardH,
        chain_h(&chain, model.beta(), mean),
    ))
}

/// `f = r² + 2β r ⊙ (P J)`. With `mean = λ` this is the per-state cost of
/// the policy-improvement step.
pub fn reward_f(
    model: &MdpModel,
    policy: &DeterministicPolicy,
    mean: &[f64],
) -> Result<ValueVector> {
    check_len(model, mean, "mean vector")?;
    let chain = induced_chain(model, policy)?;
    let pj = chain.transition.mul_vec(mean);
    let beta = model.beta();
    Ok(ValueVector::new(
        Role::RewardF,
        chain
            .reward
            .iter()
            .zip(&pj)
            .map(|(r, p)| r * r + 2.0 * beta * r * p)
            .collect(),
    ))
}

/// `σ² = (I − β²P)⁻¹ h`.
pub fn variance(model: &MdpModel, policy: &DeterministicPolicy) -> Result<ValueVector> {
    Ok(evaluate(model, policy)?.variance)
}

/// Mean and variance in one pass over the induced chain.
pub fn evaluate(model: &MdpModel, policy: &DeterministicPolicy) -> Result<Evaluation> {
    let chain = induced_chain(model, policy)?;
    let beta = model.beta();
    let mean = chain_mean(&chain, beta)?;
    let h = chain_h(&chain, beta, &mean);
    let var = solve_discounted(&DiscountedSystem::new(&chain.transition, beta * beta, &h))?;
    Ok(Evaluation {
        mean: ValueVector::new(Role::Mean, mean),
        variance: ValueVector::new(Role::Variance, var),
    })
}

/// `σ² = (I − β²P)⁻¹ f − J²`.
pub fn variance_via_f(model: &MdpModel, policy: &DeterministicPolicy) -> Result<ValueVector> {
    let chain = induced_chain(model, policy)?;
    let beta = model.beta();
    let mean = chain_mean(&chain, beta)?;
    let f = reward_f(model, policy, &mean)?;
    let second = solve_discounted(&DiscountedSystem::new(&chain.transition, beta * beta, &f))?;
    Ok(ValueVector::new(
        Role::Variance,
        second
            .iter()
            .zip(&mean)
            .map(|(m2, j)| m2 - j * j)
            .collect(),
    ))
}

/// Returns the index and size of the worst deviation `|J(i) − λ(i)|` if it
/// exceeds `tolerance`.
pub(crate) fn feasibility_gap(mean: &[f64], lambda: &[f64], tolerance: f64) -> Result<()> {
    let (state, deviation) = mean
        .iter()
        .zip(lambda)
        .map(|(j, l)| (j - l).abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    if deviation > tolerance || deviation.is_nan() {
        Err(Error::InfeasiblePolicy {
            state,
            deviation,
            tolerance,
        })
    } else {
        Ok(())
    }
}

/// The second moment of the return, `g = σ² + λ²`, for a policy whose mean
/// equals `lambda` within `tolerance`.
pub fn potential_g(
    model: &MdpModel,
    policy: &DeterministicPolicy,
    lambda: &[f64],
    tolerance: f64,
) -> Result<ValueVector> {
    check_len(model, lambda, "lambda")?;
    let eval = evaluate(model, policy)?;
    feasibility_gap(&eval.mean, lambda, tolerance)?;
    Ok(ValueVector::new(
        Role::Potential,
        eval.variance
            .iter()
            .zip(lambda)
            .map(|(v, l)| v + l * l)
            .collect(),
    ))
}

/// Mean and variance under a randomized policy.
///
/// The variance reward mixes only the linear terms over actions; the
/// quadratic `β² Σ_j p^θ(j|i) J(j)²` term uses the mixed chain.
pub fn evaluate_randomized(model: &MdpModel, policy: &RandomizedPolicy) -> Result<Evaluation> {
    let chain = induced_chain_randomized(model, policy)?;
    let beta = model.beta();
    let mean = chain_mean(&chain, beta)?;
    let sq: Vec<f64> = mean.iter().map(|v| v * v).collect();
    let pj2 = chain.transition.mul_vec(&sq);
    let h: Vec<f64> = (0..model.num_states())
        .map(|i| {
            let linear: f64 = policy
                .weights(i)
                .iter()
                .map(|&(a, w)| {
                    let r = model.reward(i, a);
                    w * (r * r + 2.0 * beta * r * model.expect(i, a, &mean))
                })
                .sum();
            linear + beta * beta * pj2[i] - sq[i]
        })
        .collect();
    let var = solve_discounted(&DiscountedSystem::new(&chain.transition, beta * beta, &h))?;
    Ok(Evaluation {
        mean: ValueVector::new(Role::Mean, mean),
        variance: ValueVector::new(Role::Variance, var),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{single_state, two_state_example};
    use crate::generate::{random_model, random_policy, ModelShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn policy(model: &MdpModel, labels: &[u32]) -> DeterministicPolicy {
        DeterministicPolicy::from_labels(model, labels).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Expectation form of h: Σ_j p(j|i)[r(i) + βJ(j)]² − J(i)².
    fn h_expectation_form(chain: &InducedChain, beta: f64, mean: &[f64]) -> Vec<f64> {
        (0..mean.len())
            .map(|i| {
                chain
                    .transition
                    .row(i)
                    .iter()
                    .zip(mean)
                    .map(|(p, j)| p * (chain.reward[i] + beta * j).powi(2))
                    .sum::<f64>()
                    - mean[i] * mean[i]
            })
            .collect()
    }

    #[test]
    fn example_means() {
        let m = two_state_example();
        assert!(close(&mean_performance(&m, &policy(&m, &[1, 2])).unwrap(), &[2.2857, 3.4286], 5e-5));
        assert!(close(&mean_performance(&m, &policy(&m, &[3, 4])).unwrap(), &[2.6364, 4.5682], 5e-5));
        let single = single_state(1.0, 0.5);
        let j = mean_performance(&single, &DeterministicPolicy::new(vec![0])).unwrap();
        assert!((j[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn example_variances() {
        let m = two_state_example();
        assert!(close(&variance(&m, &policy(&m, &[1, 1])).unwrap(), &[0.25, 0.25], 5e-5));
        assert!(close(&variance(&m, &policy(&m, &[1, 4])).unwrap(), &[0.2353, 0.0588], 5e-5));
        assert!(close(&variance(&m, &policy(&m, &[2, 1])).unwrap(), &[0.3222, 0.2556], 5e-5));
        assert!(close(&variance_via_f(&m, &policy(&m, &[2, 4])).unwrap(), &[0.2963, 0.0741], 5e-5));
        let d1 = policy(&m, &[1, 1]);
        assert!(close(&variance(&m, &d1).unwrap(), &variance_via_f(&m, &d1).unwrap(), 1e-12));
    }

    #[test]
    fn deterministic_chain_has_zero_h_and_variance() {
        let single = single_state(1.0, 0.5);
        let d = DeterministicPolicy::new(vec![0]);
        assert_eq!(new_reward_h(&single, &d, &[2.0]).unwrap().values, vec![0.0]);
        assert_eq!(variance(&single, &d).unwrap().values, vec![0.0]);
        assert!(variance_via_f(&single, &d).unwrap()[0].abs() < 1e-15);
    }

    #[test]
    fn h_forms_agree_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = ModelShape::new(3, 3);
        for _ in 0..50 {
            let model = random_model(&mut rng, &shape);
            let d = random_policy(&mut rng, &model);
            let j = mean_performance(&model, &d).unwrap();
            let chain = induced_chain(&model, &d).unwrap();
            let vec_form = new_reward_h(&model, &d, &j).unwrap();
            let exp_form = h_expectation_form(&chain, model.beta(), &j);
            assert!(close(&vec_form, &exp_form, 1e-12));
        }
    }

    #[test]
    fn bellman_and_variance_recursions_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let shape = ModelShape::new(6, 5);
        for _ in 0..100 {
            let model = random_model(&mut rng, &shape);
            let d = random_policy(&mut rng, &model);
            let chain = induced_chain(&model, &d).unwrap();
            let beta = model.beta();
            let eval = evaluate(&model, &d).unwrap();
            let mean_sys = DiscountedSystem::new(&chain.transition, beta, &chain.reward);
            let rmax = chain.reward.iter().fold(1.0f64, |m, r| m.max(r.abs()));
            assert!(mean_sys.residual(&eval.mean) <= 1e-9 * rmax);
            let h = new_reward_h(&model, &d, &eval.mean).unwrap();
            let var_sys = DiscountedSystem::new(&chain.transition, beta * beta, &h);
            let hmax = h.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            assert!(var_sys.residual(&eval.variance) <= 1e-9 * hmax);
            assert!(eval.variance.iter().all(|&v| v >= -1e-9));
            let via_f = variance_via_f(&model, &d).unwrap();
            assert!(close(&eval.variance, &via_f, 1e-9));
        }
    }

    #[test]
    fn mean_difference_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let shape = ModelShape::new(5, 4);
        for _ in 0..50 {
            let model = random_model(&mut rng, &shape);
            let d = random_policy(&mut rng, &model);
            let d2 = random_policy(&mut rng, &model);
            let (c, c2) = (induced_chain(&model, &d).unwrap(), induced_chain(&model, &d2).unwrap());
            let (j, j2) = (
                mean_performance(&model, &d).unwrap(),
                mean_performance(&model, &d2).unwrap(),
            );
            let beta = model.beta();
            let pj = c.transition.mul_vec(&j);
            let p2j = c2.transition.mul_vec(&j);
            let rhs: Vec<f64> = (0..j.len())
                .map(|i| beta * (p2j[i] - pj[i]) + c2.reward[i] - c.reward[i])
                .collect();
            let diff = solve_discounted(&DiscountedSystem::new(&c2.transition, beta, &rhs)).unwrap();
            for i in 0..j.len() {
                assert!((j2[i] - j[i] - diff[i]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn potential_matches_walkthrough() {
        let m = two_state_example();
        let lambda = [2.5, 4.5];
        let g5 = potential_g(&m, &policy(&m, &[2, 1]), &lambda, DEFAULT_FEASIBILITY_TOLERANCE).unwrap();
        assert!(close(&g5, &[6.5722, 20.5056], 5e-5));
        let g4 = potential_g(&m, &policy(&m, &[1, 4]), &lambda, DEFAULT_FEASIBILITY_TOLERANCE).unwrap();
        assert!(close(&g4, &[6.4853, 20.3088], 5e-5));
        assert_eq!(g4.role, Role::Potential);
    }

    #[test]
    fn potential_rejects_infeasible_policy() {
        let m = two_state_example();
        let err = potential_g(&m, &policy(&m, &[1, 2]), &[2.5, 4.5], DEFAULT_FEASIBILITY_TOLERANCE)
            .unwrap_err();
        assert!(matches!(err, Error::InfeasiblePolicy { state: 1, .. }));
    }

    #[test]
    fn potential_of_zero_reward_model_is_zero() {
        let m = single_state(0.0, 0.3);
        let g = potential_g(&m, &DeterministicPolicy::new(vec![0]), &[0.0], 1e-7).unwrap();
        assert_eq!(g.values, vec![0.0]);
    }

    #[test]
    fn point_mass_randomized_matches_deterministic() {
        let m = two_state_example();
        let d4 = policy(&m, &[1, 4]);
        let det = evaluate(&m, &d4).unwrap();
        let rnd = evaluate_randomized(&m, &RandomizedPolicy::point_mass(&d4)).unwrap();
        assert_eq!(det, rnd);
    }

    #[test]
    fn uniform_mixture_over_feasible_actions_keeps_mean() {
        let m = two_state_example();
        let theta = RandomizedPolicy::uniform(&[vec![0, 1], vec![0, 2, 3]]);
        let eval = evaluate_randomized(&m, &theta).unwrap();
        assert!(close(&eval.mean, &[2.5, 4.5], 1e-12));
        let best = [0.2353 - 5e-5, 0.0588 - 5e-5];
        assert!(eval.variance.iter().zip(&best).all(|(v, b)| v >= b));
    }

    #[test]
    fn randomized_variance_satisfies_mixed_recursion() {
        // σ²(i) = Σ_a θ_{i,a} E[(r(i,a) + βJ(X₁))² + β²σ²(X₁) | a] − J(i)²
        let m = two_state_example();
        let theta = RandomizedPolicy::new(vec![vec![(0, 0.3), (2, 0.7)], vec![(1, 0.6), (3, 0.4)]]);
        let eval = evaluate_randomized(&m, &theta).unwrap();
        let beta = m.beta();
        for i in 0..2 {
            let second: f64 = theta
                .weights(i)
                .iter()
                .map(|&(a, w)| {
                    let r = m.reward(i, a);
                    w * m
                        .transition(i, a)
                        .iter()
                        .enumerate()
                        .map(|(j, p)| {
                            p * ((r + beta * eval.mean[j]).powi(2) + beta * beta * eval.variance[j])
                        })
                        .sum::<f64>()
                })
                .sum();
            assert!((second - eval.mean[i].powi(2) - eval.variance[i]).abs() < 1e-12);
        }
    }
}
