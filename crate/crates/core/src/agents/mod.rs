//! Self-play agents: an average policy learned from a reservoir of
//! best-response choices, plus either a Q-learning or a regret-matching
//! best response trained from a circular replay memory.

mod agent;
mod average;
mod buffers;
pub mod checkpoint;
mod qlearn;
mod selfplay;

pub use agent::{Agent, AgentConfig, AgentStats, Algorithm, BestResponse};
pub use average::AveragePolicy;
pub use buffers::{legal_mask, Insert, Mode, NextState, RlBuffer, SlBuffer, SlItem, Transition};
pub use qlearn::{argmax, QLearner, RlStats};
pub use selfplay::{eval_points, play_episode, run_selfplay, Player, PolicyPlayer, SelfPlayConfig, SelfPlayLog};
