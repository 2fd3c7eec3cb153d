//! Small built-in models.

use crate::model::{Action, MdpModel};

/// Two-state model with three actions in state 1 and four in state 2,
/// `β = 0.5`, `p(2|1,a) = a/4` and `p(1|2,a) = a/4`.
///
/// The same model ships as `examples/paper_sec4.json`.
pub fn two_state_example() -> MdpModel {
    let state1 = [1.0, 0.75, 19.0 / 32.0]
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let a = (k + 1) as f64;
            Action::new(k as u32 + 1, r, vec![1.0 - a / 4.0, a / 4.0])
        })
        .collect();
    let state2 = [2.5, 2.0, 3.0, 3.25]
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let a = (k + 1) as f64;
            Action::new(k as u32 + 1, r, vec![a / 4.0, 1.0 - a / 4.0])
        })
        .collect();
    MdpModel::new(0.5, vec![state1, state2])
}

/// One state, one action, self-loop with the given reward.
pub fn single_state(reward: f64, beta: f64) -> MdpModel {
    MdpModel::new(beta, vec![vec![Action::new(1, reward, vec![1.0])]])
}
