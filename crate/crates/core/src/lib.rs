//! Fictitious self-play on small extensive-form games.
//!
//! The crate provides the game abstraction and four bundled games, tabular
//! and small feedforward function approximators, the regret-matching
//! learner used in place of a Q-learning best response, NFSP-style agents,
//! and an exact evaluator (best response, exploitability, arenas).

pub mod agents;
pub mod approx;
pub mod error;
pub mod eval;
pub mod game;
pub mod games;
pub mod policy;
pub mod regret;
pub mod tree;

pub use error::{Error, Result};
pub use game::{enumerate_infostates, ActionId, Game, GameRef, GameState, InfoStateKey, Node, Payoff, ToAct};
pub use games::{build_game, build_game_by_name, GameKind, GameSpec};
pub use policy::{mixture_policy, Distribution, Policy, TabularPolicy, UniformPolicy};
