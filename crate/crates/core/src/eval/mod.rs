//! Exact evaluation on the expanded game tree, plus sampled matches.

mod arena;
mod best_response;
mod probes;

pub use arena::{arena, MatchReport};
pub use best_response::{best_response_policy, best_response_value, best_response_value_resolved};
pub use probes::{
    fixed_opponent_regret_probe, learning_curve_probe, log_grid, ProbeConfig, RegretPoint, Seat,
};

use crate::policy::Policy;
use crate::tree::GameTree;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    /// `(ε_0 + ε_1) / 2`.
    pub exploitability: f64,
    /// Best-response value of each player against the other's policy.
    pub br_values: [f64; 2],
    /// Expected payoffs of the profile itself.
    pub profile_values: [f64; 2],
    pub episode: u64,
    pub seed: u64,
}

impl EvalReport {
    /// Per-player gains `ε_i = BR_i - value_i`.
    pub fn gains(&self) -> [f64; 2] {
        [self.br_values[0] - self.profile_values[0], self.br_values[1] - self.profile_values[1]]
    }

    pub fn nash_conv(&self) -> f64 {
        self.gains().iter().sum()
    }
}

/// Expected payoffs when both players follow `profile`.
pub fn profile_values(tree: &GameTree, profile: [&dyn Policy; 2]) -> [f64; 2] {
    tree.expected_payoffs(&tree.resolve(profile))
}

/// Exploitability of `profile`. Keys missing from a policy are played
/// uniformly.
pub fn exploitability(tree: &GameTree, profile: [&dyn Policy; 2]) -> EvalReport {
    let strategy = tree.resolve(profile);
    let values = tree.expected_payoffs(&strategy);
    let br = [
        best_response_value_resolved(tree, &strategy, 0),
        best_response_value_resolved(tree, &strategy, 1),
    ];
    let gains = [br[0] - values[0], br[1] - values[1]];
    EvalReport {
        exploitability: (gains[0] + gains[1]) / 2.0,
        br_values: br,
        profile_values: values,
        episode: 0,
        seed: 0,
    }
}
