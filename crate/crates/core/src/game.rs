//! Extensive-form game abstraction: two-player, zero-sum, perfect recall,
//! explicit chance nodes, undiscounted terminal payoffs.
//!
//! A concrete game only has to describe a node from its action history
//! ([`Game::node`]) and render information-state keys ([`Game::key_for`]).
//! Everything else (legality checks, value-semantics transitions, payoff
//! access) is provided on top of that.

use crate::error::{Error, Result};
use crate::games::GameKind;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Action identifier. Player actions and chance outcomes share the type but
/// are interpreted per node.
pub type ActionId = u32;

/// Who moves at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ToAct {
    Player(usize),
    Chance,
    Terminal,
}

/// Per-player returns at a terminal node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Payoff(pub [f64; 2]);

impl Payoff {
    pub fn get(&self, player: usize) -> f64 {
        self.0[player]
    }

    pub fn sum(&self) -> f64 {
        self.0[0] + self.0[1]
    }
}

/// Everything the framework needs to know about one node, computed by the
/// concrete game from the action history.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Chance outcomes in ascending id order with their probabilities.
    Chance(Vec<(ActionId, f64)>),
    /// Acting player and legal actions in ascending id order.
    Decision { player: usize, legal: Vec<ActionId> },
    Terminal(Payoff),
}

/// Perfect-recall information-state identifier.
///
/// Keys are short ASCII strings of the form `<player>:<private>:<public>`
/// (layout per game, see the game modules). They never contain tabs or
/// newlines, so they can be written verbatim into line-oriented files.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfoStateKey(String);

impl InfoStateKey {
    pub fn new(key: impl Into<String>) -> Self {
        InfoStateKey(key.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The player encoded in the key prefix, if well formed.
    pub fn player(&self) -> Option<usize> {
        match self.0.as_bytes() {
            [b'0', b':', ..] => Some(0),
            [b'1', b':', ..] => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for InfoStateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One node of a game tree, held by value. Applying an action returns a new
/// state; the parent is never modified.
#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    history: Vec<ActionId>,
    node: Node,
}

impl GameState {
    pub fn history(&self) -> &[ActionId] {
        &self.history
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn to_act(&self) -> ToAct {
        match &self.node {
            Node::Chance(_) => ToAct::Chance,
            Node::Decision { player, .. } => ToAct::Player(*player),
            Node::Terminal(_) => ToAct::Terminal,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.node, Node::Terminal(_))
    }

    pub fn is_chance(&self) -> bool {
        matches!(self.node, Node::Chance(_))
    }

    pub fn current_player(&self) -> Option<usize> {
        match self.node {
            Node::Decision { player, .. } => Some(player),
            _ => None,
        }
    }
}

/// A finite two-player zero-sum extensive-form game.
pub trait Game: Send + Sync + fmt::Debug {
    fn kind(&self) -> GameKind;

    /// One more than the largest player action id.
    fn num_distinct_actions(&self) -> usize;

    /// Longest possible history, chance outcomes included.
    fn max_game_length(&self) -> usize;

    /// Tight bounds on every terminal payoff entry.
    fn payoff_bounds(&self) -> (f64, f64);

    /// Length of the vector produced by [`Game::encode_features`].
    fn feature_len(&self) -> usize;

    /// Describe the node reached by `history`. `history` is assumed to be
    /// reachable; callers go through [`Game::apply_action`].
    fn node(&self, history: &[ActionId]) -> Node;

    /// Information-state key of `player` at a non-chance history.
    fn key_for(&self, history: &[ActionId], player: usize) -> InfoStateKey;

    /// Fixed-length feature vector for a key of this game.
    fn encode_features(&self, key: &InfoStateKey) -> Result<Vec<f64>>;

    /// Human-readable action label, used in logs and tests.
    fn action_label(&self, action: ActionId) -> String {
        action.to_string()
    }

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> GameState {
        GameState { history: Vec::new(), node: self.node(&[]) }
    }

    fn legal_actions<'s>(&self, state: &'s GameState) -> Result<&'s [ActionId]> {
        match &state.node {
            Node::Decision { legal, .. } => Ok(legal),
            Node::Chance(_) => Err(Error::ChanceState("legal_actions")),
            Node::Terminal(_) => Err(Error::TerminalState("legal_actions")),
        }
    }

    fn chance_outcomes(&self, state: &GameState) -> Result<Vec<(ActionId, f64)>> {
        match &state.node {
            Node::Chance(outcomes) => Ok(outcomes.clone()),
            _ => Err(Error::NotChance),
        }
    }

    fn apply_action(&self, state: &GameState, action: ActionId) -> Result<GameState> {
        let allowed = match &state.node {
            Node::Decision { legal, .. } => legal.binary_search(&action).is_ok(),
            Node::Chance(outcomes) => outcomes.iter().any(|&(a, _)| a == action),
            Node::Terminal(_) => return Err(Error::TerminalState("apply_action")),
        };
        if !allowed {
            let described = match state.node {
                Node::Decision { player, .. } => {
                    self.key_for(&state.history, player).to_string()
                }
                _ => format!("{:?}", state.history),
            };
            return Err(Error::IllegalAction { state: described, action });
        }
        let mut history = Vec::with_capacity(state.history.len() + 1);
        history.extend_from_slice(&state.history);
        history.push(action);
        let node = self.node(&history);
        Ok(GameState { history, node })
    }

    fn returns(&self, state: &GameState) -> Result<Payoff> {
        match state.node {
            Node::Terminal(p) => Ok(p),
            _ => Err(Error::NotTerminal),
        }
    }

    fn info_state_key(&self, state: &GameState, player: usize) -> Result<InfoStateKey> {
        if player >= self.num_players() {
            return Err(Error::InvalidPlayer(player));
        }
        if state.is_chance() {
            return Err(Error::ChanceState("info_state_key"));
        }
        Ok(self.key_for(&state.history, player))
    }
}

/// Shared handle to a game; games are immutable and freely shareable.
pub type GameRef = Arc<dyn Game>;

/// All information-state keys of the acting player at every reachable
/// decision node, per player. Depth-first.
pub fn enumerate_infostates(game: &dyn Game) -> [BTreeSet<InfoStateKey>; 2] {
    let mut out = [BTreeSet::new(), BTreeSet::new()];
    let mut stack = vec![game.initial_state()];
    while let Some(state) = stack.pop() {
        match state.node() {
            Node::Terminal(_) => {}
            Node::Chance(outcomes) => {
                for &(a, _) in outcomes {
                    stack.push(game.apply_action(&state, a).expect("chance outcome"));
                }
            }
            Node::Decision { player, legal } => {
                out[*player].insert(game.key_for(state.history(), *player));
                for &a in legal {
                    stack.push(game.apply_action(&state, a).expect("legal action"));
                }
            }
        }
    }
    out
}
