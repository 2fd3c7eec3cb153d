//! Mean-variance optimization for finite discounted Markov decision
//! processes.
//!
//! The crate evaluates the mean and the variance of the total discounted
//! reward in closed form, restricts the policy space to the policies whose
//! mean vector equals a target `λ`, and finds the variance-minimal member of
//! that set by policy iteration, value iteration or exhaustive search.
//!
//! ```no_run
//! use mvmdp::{constrain, fixtures, solve};
//!
//! let model = fixtures::two_state_example();
//! let sets = constrain::feasible_sets(&model, &[2.5, 4.5], 1e-7).unwrap();
//! let best = solve::policy_iteration(&model, &sets, None, solve::DEFAULT_TIE_TOLERANCE).unwrap();
//! println!("{:?} {:?}", best.optimal_policy.labels(&model), best.optimal_variance.values);
//! ```

pub mod cli;
pub mod constrain;
pub mod error;
pub mod evaluate;
pub mod fixtures;
pub mod frontier;
pub mod generate;
pub mod io;
pub mod linsolve;
pub mod model;
pub mod report;
pub mod simulate;
pub mod solve;

pub use error::{Error, Result};
pub use model::{
    ActionLabel, DeterministicPolicy, MdpModel, RandomizedPolicy, Role, ValueVector,
};
