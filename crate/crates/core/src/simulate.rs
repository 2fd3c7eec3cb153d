//! Monte Carlo estimates of the discounted return, used to cross-check the
//! closed forms.
//!
//! Path `k` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `k`, so estimates are reproducible and independent of how paths are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluate::{mean_performance, new_reward_h};
use crate::model::{induced_chain, DeterministicPolicy, MdpModel, RandomizedPolicy};

/// Identifier of the path generator, carried in every estimate.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/stream=path";

/// Truncation error the default horizon is chosen to stay under.
pub const DEFAULT_TRUNCATION_TARGET: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub enum SimPolicy<'a> {
    Deterministic(&'a DeterministicPolicy),
    Randomized(&'a RandomizedPolicy),
}

impl<'a> From<&'a DeterministicPolicy> for SimPolicy<'a> {
    fn from(p: &'a DeterministicPolicy) -> Self {
        SimPolicy::Deterministic(p)
    }
}

impl<'a> From<&'a RandomizedPolicy> for SimPolicy<'a> {
    fn from(p: &'a RandomizedPolicy) -> Self {
        SimPolicy::Randomized(p)
    }
}

impl SimPolicy<'_> {
    fn check(&self, model: &MdpModel) -> Result<()> {
        match self {
            SimPolicy::Deterministic(p) => p.check(model),
            SimPolicy::Randomized(p) => p.check(model),
        }
    }

    /// Largest `|r(i,a)|` over actions the policy can play.
    fn reward_bound(&self, model: &MdpModel) -> f64 {
        (0..model.num_states())
            .flat_map(|i| -> Vec<f64> {
                match self {
                    SimPolicy::Deterministic(p) => vec![model.reward(i, p.action(i)).abs()],
                    SimPolicy::Randomized(p) => p
                        .weights(i)
                        .iter()
                        .filter(|(_, w)| *w > 0.0)
                        .map(|&(a, _)| model.reward(i, a).abs())
                        .collect(),
                }
            })
            .fold(0.0, f64::max)
    }

    fn pick<R: Rng>(&self, rng: &mut R, state: usize) -> usize {
        match self {
            SimPolicy::Deterministic(p) => p.action(state),
            SimPolicy::Randomized(p) => {
                let w = p.weights(state);
                let k = sample_index(rng, w.iter().map(|(_, w)| *w));
                w[k].0
            }
        }
    }
}

/// Inverse-CDF draw from a discrete distribution; falls back to the last
/// positive entry when round-off leaves the cumulative sum below `u`.
fn sample_index<R: Rng, I: Iterator<Item = f64>>(rng: &mut R, probs: I) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, p) in probs.enumerate() {
        if p > 0.0 {
            last = k;
        }
        acc += p;
        if u < acc {
            return k;
        }
    }
    last
}

/// `r_max β^{T+1} / (1 − β)`.
pub fn truncation_bound(reward_bound: f64, beta: f64, horizon: usize) -> f64 {
    reward_bound * beta.powi(horizon as i32 + 1) / (1.0 - beta)
}

/// Smallest horizon `T ≥ 1` whose truncation bound is at most `target`.
pub fn default_horizon(reward_bound: f64, beta: f64, target: f64) -> usize {
    let mut t = 1;
    while truncation_bound(reward_bound, beta, t) > target {
        t += 1;
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationEstimate {
    pub start_state: usize,
    pub mean_estimate: f64,
    pub variance_estimate: f64,
    pub std_error_mean: f64,
    pub std_error_variance: f64,
    pub num_paths: usize,
    pub horizon: usize,
    pub truncation_bound: f64,
    pub seed: u64,
    pub rng: String,
}

fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Moments of a sample: `(mean, unbiased variance, se of mean, se of variance)`.
fn sample_moments(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    // Shifting by the first sample keeps constant samples exact.
    let shift = xs[0];
    let d_mean = xs.iter().map(|x| x - shift).sum::<f64>() / n;
    let mean = shift + d_mean;
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in xs {
        let d = (x - shift) - d_mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    let var = m2 * n / (n - 1.0);
    let se_mean = (var / n).sqrt();
    let se_var = ((m4 - m2 * m2).max(0.0) / n).sqrt();
    (mean, var, se_mean, se_var)
}

/// Simulates `num_paths` returns `Σ_{t=0}^{T} β^t r(X_t, A_t)` from
/// `start_state`. `horizon = None` picks [`default_horizon`].
pub fn simulate_policy<'a>(
    model: &MdpModel,
    policy: impl Into<SimPolicy<'a>>,
    start_state: usize,
    num_paths: usize,
    horizon: Option<usize>,
    seed: u64,
) -> Result<SimulationEstimate> {
    let policy = policy.into();
    policy.check(model)?;
    if start_state >= model.num_states() {
        return Err(Error::InvalidArgument(format!(
            "start state {} does not exist",
            start_state + 1
        )));
    }
    if num_paths < 2 {
        return Err(Error::InvalidArgument("at least two paths are required".into()));
    }
    let beta = model.beta();
    let r_max = policy.reward_bound(model);
    let horizon = match horizon {
        Some(0) => return Err(Error::InvalidArgument("horizon must be positive".into())),
        Some(t) => t,
        None => default_horizon(r_max, beta, DEFAULT_TRUNCATION_TARGET),
    };
    let returns: Vec<f64> = (0..num_paths as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = path_rng(seed, k);
            let mut state = start_state;
            let mut discount = 1.0;
            let mut total = 0.0;
            for t in 0..=horizon {
                let a = policy.pick(&mut rng, state);
                total += discount * model.reward(state, a);
                if t < horizon {
                    state = sample_index(&mut rng, model.transition(state, a).iter().copied());
                    discount *= beta;
                }
            }
            total
        })
        .collect();
    let (mean, var, se_mean, se_var) = sample_moments(&returns);
    Ok(SimulationEstimate {
        start_state,
        mean_estimate: mean,
        variance_estimate: var,
        std_error_mean: se_mean,
        std_error_variance: se_var,
        num_paths,
        horizon,
        truncation_bound: truncation_bound(r_max, beta, horizon),
        seed,
        rng: RNG_ALGORITHM.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HCheckState {
    pub state: usize,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HCheckReport {
    pub num_samples: usize,
    pub seed: u64,
    pub states: Vec<HCheckState>,
}

impl HCheckReport {
    pub fn max_abs_z(&self) -> f64 {
        self.states.iter().map(|s| s.z.abs()).fold(0.0, f64::max)
    }
}

/// One-step estimate of `E[(r(i) + βJ(X₁))² − J(i)² | X₀ = i]` per state,
/// compared against the closed-form variance reward `h(i)`.
pub fn sample_path_h_check(
    model: &MdpModel,
    policy: &DeterministicPolicy,
    num_samples: usize,
    seed: u64,
) -> Result<HCheckReport> {
    if num_samples < 2 {
        return Err(Error::InvalidArgument("at least two samples are required".into()));
    }
    let chain = induced_chain(model, policy)?;
    let mean = mean_performance(model, policy)?;
    let h = new_reward_h(model, policy, &mean)?;
    let beta = model.beta();
    let states = (0..model.num_states())
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let row = chain.transition.row(i);
            let r = chain.reward[i];
            let draws: Vec<f64> = (0..num_samples)
                .map(|_| {
                    let j = sample_index(&mut rng, row.iter().copied());
                    (r + beta * mean[j]).powi(2) - mean[i] * mean[i]
                })
                .collect();
            let (est, var, _, _) = sample_moments(&draws);
            let se = (var / num_samples as f64).sqrt();
            let gap = est - h[i];
            let z = if se > 0.0 {
                gap / se
            } else if gap.abs() <= 1e-12 * h[i].abs().max(1.0) {
                0.0
            } else {
                gap.signum() * f64::INFINITY
            };
            HCheckState {
                state: i,
                analytic: h[i],
                estimate: est,
                std_error: se,
                z,
            }
        })
        .collect();
    Ok(HCheckReport {
        num_samples,
        seed,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{single_state, two_state_example};
    use crate::model::Action;

    #[test]
    fn constant_chain_is_exact() {
        let m = single_state(1.0, 0.5);
        let d = DeterministicPolicy::new(vec![0]);
        let est = simulate_policy(&m, &d, 0, 1000, Some(10), 3).unwrap();
        let exact: f64 = (0..=10).map(|t| 0.5f64.powi(t)).sum();
        assert_eq!(est.variance_estimate, 0.0);
        assert_eq!(est.std_error_variance, 0.0);
        assert_eq!(est.mean_estimate, exact);
    }

    #[test]
    fn default_horizon_meets_target() {
        let t = default_horizon(3.25, 0.5, 1e-6);
        assert!(truncation_bound(3.25, 0.5, t) <= 1e-6);
        assert!(truncation_bound(3.25, 0.5, t - 1) > 1e-6);
        assert_eq!(default_horizon(0.0, 0.5, 1e-6), 1);
    }

    #[test]
    fn reproducible_bitwise() {
        let m = two_state_example();
        let d = DeterministicPolicy::from_labels(&m, &[2, 1]).unwrap();
        let a = simulate_policy(&m, &d, 0, 5000, None, 42).unwrap();
        let b = simulate_policy(&m, &d, 0, 5000, None, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_policy(&m, &d, 0, 5000, None, 43).unwrap();
        assert_ne!(a.mean_estimate, c.mean_estimate);
    }

    #[test]
    fn truncation_bound_is_honest() {
        let m = two_state_example();
        for d in m.policies() {
            let chain = induced_chain(&m, &d).unwrap();
            let j = mean_performance(&m, &d).unwrap();
            let r_max = chain.reward.iter().fold(0.0f64, |a, r| a.max(r.abs()));
            for horizon in [1usize, 3, 8, 20] {
                // Σ_{t≤T} β^t P^t r, exactly.
                let mut term = chain.reward.clone();
                let mut acc = chain.reward.clone();
                for _ in 0..horizon {
                    term = chain.transition.mul_vec(&term).iter().map(|v| v * m.beta()).collect();
                    for (a, t) in acc.iter_mut().zip(&term) {
                        *a += t;
                    }
                }
                let bound = truncation_bound(r_max, m.beta(), horizon);
                for i in 0..2 {
                    assert!((j[i] - acc[i]).abs() <= bound + 1e-12);
                }
            }
        }
    }

    #[test]
    fn std_errors_shrink_with_more_paths() {
        let m = two_state_example();
        let d = DeterministicPolicy::from_labels(&m, &[2, 1]).unwrap();
        let mut ratios = Vec::new();
        for seed in 0..10 {
            let a = simulate_policy(&m, &d, 0, 4000, None, seed).unwrap();
            let b = simulate_policy(&m, &d, 0, 8000, None, seed + 100).unwrap();
            ratios.push(b.std_error_mean / a.std_error_mean);
        }
        let avg = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let target = 1.0 / 2f64.sqrt();
        assert!((avg - target).abs() <= 0.1, "{avg}");
    }

    #[test]
    fn deterministic_transitions_match_h_exactly() {
        let m = MdpModel::new(
            0.7,
            vec![
                vec![Action::new(1, 1.0, vec![0.0, 1.0])],
                vec![Action::new(1, -2.0, vec![1.0, 0.0])],
            ],
        );
        let d = DeterministicPolicy::new(vec![0, 0]);
        let report = sample_path_h_check(&m, &d, 1000, 1).unwrap();
        for s in &report.states {
            assert_eq!(s.std_error, 0.0);
            assert!((s.estimate - s.analytic).abs() <= 1e-12);
            assert_eq!(s.z, 0.0);
        }
    }

    #[test]
    fn invalid_arguments() {
        let m = two_state_example();
        let d = DeterministicPolicy::from_labels(&m, &[2, 1]).unwrap();
        assert!(simulate_policy(&m, &d, 2, 100, None, 0).is_err());
        assert!(simulate_policy(&m, &d, 0, 1, None, 0).is_err());
        assert!(simulate_policy(&m, &d, 0, 100, Some(0), 0).is_err());
    }
}
