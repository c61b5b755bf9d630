//! Fully expanded game tree with interned information sets.
//!
//! Nodes are stored in depth-first preorder, so every child index is larger
//! than its parent's.

use crate::game::{ActionId, GameRef, InfoStateKey, Node};
use crate::policy::Policy;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub enum TreeNode {
    Terminal([f64; 2]),
    /// `(probability, child)` pairs.
    Chance(Vec<(f64, usize)>),
    /// Children aligned with the infoset's legal actions.
    Decision { player: usize, infoset: usize, children: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Infoset {
    pub key: InfoStateKey,
    pub player: usize,
    pub legal: Vec<ActionId>,
}

#[derive(Debug, Clone)]
pub struct GameTree {
    game: GameRef,
    nodes: Vec<TreeNode>,
    infosets: Vec<Infoset>,
    index: HashMap<InfoStateKey, usize>,
}

impl GameTree {
    pub fn build(game: GameRef) -> Self {
        let mut tree =
            GameTree { game: game.clone(), nodes: Vec::new(), infosets: Vec::new(), index: HashMap::new() };
        let mut history = Vec::with_capacity(game.max_game_length());
        tree.expand(&mut history);
        tree
    }

    fn expand(&mut self, history: &mut Vec<ActionId>) -> usize {
        let id = self.nodes.len();
        match self.game.node(history) {
            Node::Terminal(p) => self.nodes.push(TreeNode::Terminal(p.0)),
            Node::Chance(outcomes) => {
                self.nodes.push(TreeNode::Chance(Vec::new()));
                let mut children = Vec::with_capacity(outcomes.len());
                for (a, p) in outcomes {
                    history.push(a);
                    children.push((p, self.expand(history)));
                    history.pop();
                }
                self.nodes[id] = TreeNode::Chance(children);
            }
            Node::Decision { player, legal } => {
                let key = self.game.key_for(history, player);
                let infoset = match self.index.get(&key) {
                    Some(&i) => {
                        debug_assert_eq!(self.infosets[i].legal, legal);
                        i
                    }
                    None => {
                        let i = self.infosets.len();
                        self.index.insert(key.clone(), i);
                        self.infosets.push(Infoset { key, player, legal: legal.clone() });
                        i
                    }
                };
                self.nodes.push(TreeNode::Decision { player, infoset, children: Vec::new() });
                let mut children = Vec::with_capacity(legal.len());
                for a in legal {
                    history.push(a);
                    children.push(self.expand(history));
                    history.pop();
                }
                self.nodes[id] = TreeNode::Decision { player, infoset, children };
            }
        }
        id
    }

    pub fn game(&self) -> &GameRef {
        &self.game
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn infosets(&self) -> &[Infoset] {
        &self.infosets
    }

    pub fn infoset_index(&self, key: &InfoStateKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Distribution at every infoset, taking player `p`'s rows from
    /// `profile[p]`.
    pub fn resolve(&self, profile: [&dyn Policy; 2]) -> Vec<Vec<f64>> {
        self.infosets
            .iter()
            .map(|info| profile[info.player].action_probabilities(&info.key, &info.legal).into_vec())
            .collect()
    }

    /// Expected payoff vector when both players follow `strategy`
    /// (as produced by [`GameTree::resolve`]).
    pub fn expected_payoffs(&self, strategy: &[Vec<f64>]) -> [f64; 2] {
        let mut value = vec![[0.0; 2]; self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            value[id] = match &self.nodes[id] {
                TreeNode::Terminal(p) => *p,
                TreeNode::Chance(children) => children.iter().fold([0.0; 2], |acc, &(p, c)| {
                    [acc[0] + p * value[c][0], acc[1] + p * value[c][1]]
                }),
                TreeNode::Decision { infoset, children, .. } => {
                    let probs = &strategy[*infoset];
                    children.iter().zip(probs).fold([0.0; 2], |acc, (&c, &p)| {
                        [acc[0] + p * value[c][0], acc[1] + p * value[c][1]]
                    })
                }
            };
        }
        value[0]
    }

    /// Number of terminal nodes.
    pub fn num_terminals(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Terminal(_))).count()
    }
}

/// Convenience: build the tree for a game handle.
pub fn build_tree(game: &GameRef) -> GameTree {
    GameTree::build(game.clone())
}
