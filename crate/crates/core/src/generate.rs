//! Random tabular models for property sweeps and examples.
//!
//! [`random_instance`] also picks a target mean `λ = J(d)` for a random
//! policy `d` and then "plants" extra feasible actions: for some
//! non-chosen actions it draws a fresh transition row and sets the reward to
//! `λ(i) − β Σ_j p(j|i,a) λ(j)`, so that the mean-constrained policy set has
//! more than one member. Planted rewards stay inside the reward range; a
//! planting attempt that cannot satisfy this is dropped.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::evaluate::mean_performance;
use crate::model::{Action, DeterministicPolicy, MdpModel};

#[derive(Clone, Debug)]
pub struct ModelShape {
    pub states: RangeInclusive<usize>,
    pub actions: RangeInclusive<usize>,
    pub betas: Vec<f64>,
    /// Rewards are drawn from `[-reward_bound, reward_bound]`.
    pub reward_bound: f64,
    /// Chance that a non-chosen action is made feasible.
    pub plant_probability: f64,
}

impl ModelShape {
    /// Up to `max_states` states with up to `max_actions` actions each.
    pub fn new(max_states: usize, max_actions: usize) -> Self {
        ModelShape {
            states: 1..=max_states,
            actions: 1..=max_actions,
            betas: vec![0.3, 0.5, 0.9],
            reward_bound: 2.0,
            plant_probability: 0.5,
        }
    }

    /// `S ∈ {2,3,4}`, `|A(i)| ∈ {2,3}`, rewards in `[-2,2]`,
    /// `β ∈ {0.3,0.5,0.9}`.
    pub fn small() -> Self {
        ModelShape {
            states: 2..=4,
            actions: 2..=3,
            ..ModelShape::new(4, 3)
        }
    }
}

fn random_row<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn random_model<R: Rng>(rng: &mut R, shape: &ModelShape) -> MdpModel {
    let s = rng.gen_range(shape.states.clone());
    let beta = *shape.betas.choose(rng).expect("at least one discount");
    let states = (0..s)
        .map(|_| {
            let k = rng.gen_range(shape.actions.clone());
            (0..k)
                .map(|a| {
                    Action::new(
                        a as u32 + 1,
                        rng.gen_range(-shape.reward_bound..=shape.reward_bound),
                        random_row(rng, s),
                    )
                })
                .collect()
        })
        .collect();
    MdpModel::new(beta, states)
}

pub fn random_policy<R: Rng>(rng: &mut R, model: &MdpModel) -> DeterministicPolicy {
    DeterministicPolicy::new(
        (0..model.num_states())
            .map(|i| rng.gen_range(0..model.num_actions(i)))
            .collect(),
    )
}

/// A random model with a target mean taken from one of its policies.
#[derive(Clone, Debug)]
pub struct Instance {
    pub model: MdpModel,
    pub lambda: Vec<f64>,
    /// The policy `λ` was computed from.
    pub source: DeterministicPolicy,
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: &ModelShape) -> Instance {
    let base = random_model(rng, shape);
    let source = random_policy(rng, &base);
    let lambda = mean_performance(&base, &source)
        .expect("random policy is valid")
        .into_inner();
    let beta = base.beta();
    let s = base.num_states();
    let states = (0..s)
        .map(|i| {
            base.actions(i)
                .iter()
                .enumerate()
                .map(|(a, action)| {
                    if a == source.action(i) || !rng.gen_bool(shape.plant_probability) {
                        return action.clone();
                    }
                    for _ in 0..20 {
                        let row = random_row(rng, s);
                        let ev: f64 = row.iter().zip(&lambda).map(|(p, l)| p * l).sum();
                        let reward = lambda[i] - beta * ev;
                        if reward.abs() <= shape.reward_bound {
                            return Action::new(action.label, reward, row);
                        }
                    }
                    action.clone()
                })
                .collect()
        })
        .collect();
    Instance {
        model: MdpModel::new(beta, states),
        lambda,
        source,
    }
}
