use crate::policy::{Policy, TabularPolicy};
use crate::tree::{GameTree, TreeNode};

/// Exact best response of `player` against the fixed rows of `strategy`
/// (one distribution per infoset, as from [`GameTree::resolve`]).
struct Solver<'t> {
    tree: &'t GameTree,
    strategy: &'t [Vec<f64>],
    player: usize,
    /// Opponent-and-chance reach of every node.
    reach: Vec<f64>,
    /// Responder nodes of each infoset.
    members: Vec<Vec<usize>>,
    value: Vec<f64>,
    choice: Vec<Option<usize>>,
}

impl<'t> Solver<'t> {
    fn new(tree: &'t GameTree, strategy: &'t [Vec<f64>], player: usize) -> Self {
        let nodes = tree.nodes();
        let mut reach = vec![0.0; nodes.len()];
        let mut members = vec![Vec::new(); tree.infosets().len()];
        reach[tree.root()] = 1.0;
        for (id, node) in nodes.iter().enumerate() {
            let r = reach[id];
            match node {
                TreeNode::Terminal(_) => {}
                TreeNode::Chance(children) => {
                    for &(p, c) in children {
                        reach[c] = r * p;
                    }
                }
                TreeNode::Decision { player: p, infoset, children } => {
                    if *p == player {
                        members[*infoset].push(id);
                        for &c in children {
                            reach[c] = r;
                        }
                    } else {
                        for (&c, &prob) in children.iter().zip(&strategy[*infoset]) {
                            reach[c] = r * prob;
                        }
                    }
                }
            }
        }
        let n_infosets = tree.infosets().len();
        Solver {
            tree,
            strategy,
            player,
            reach,
            members,
            value: vec![f64::NAN; nodes.len()],
            choice: vec![None; n_infosets],
        }
    }

    fn value(&mut self, id: usize) -> f64 {
        if !self.value[id].is_nan() {
            return self.value[id];
        }
        let v = match &self.tree.nodes()[id] {
            TreeNode::Terminal(p) => p[self.player],
            TreeNode::Chance(children) => children.iter().map(|&(p, c)| p * self.value(c)).sum(),
            TreeNode::Decision { player, infoset, children } => {
                if *player == self.player {
                    let a = self.choose(*infoset);
                    self.value(children[a])
                } else {
                    let strategy = self.strategy;
                    children.iter().zip(&strategy[*infoset]).map(|(&c, &p)| if p > 0.0 { p * self.value(c) } else { 0.0 }).sum()
                }
            }
        };
        self.value[id] = v;
        v
    }

    /// Best action index at a responder infoset, ties to the lowest index.
    fn choose(&mut self, infoset: usize) -> usize {
        if let Some(a) = self.choice[infoset] {
            return a;
        }
        let n = self.tree.infosets()[infoset].legal.len();
        let mut totals = vec![0.0; n];
        for k in 0..self.members[infoset].len() {
            let id = self.members[infoset][k];
            let w = self.reach[id];
            let TreeNode::Decision { children, .. } = &self.tree.nodes()[id] else { unreachable!() };
            let children = children.clone();
            for (a, c) in children.into_iter().enumerate() {
                let v = self.value(c);
                totals[a] += w * v;
            }
        }
        let best = crate::agents::argmax(&totals);
        self.choice[infoset] = Some(best);
        best
    }
}

/// Value `player` obtains by best-responding to the other player's rows of
/// `strategy`.
pub fn best_response_value_resolved(tree: &GameTree, strategy: &[Vec<f64>], player: usize) -> f64 {
    let mut solver = Solver::new(tree, strategy, player);
    solver.value(tree.root())
}

/// Exact best-response value for `player` against `profile[1 - player]`.
/// `profile[player]` is ignored.
pub fn best_response_value(tree: &GameTree, profile: [&dyn Policy; 2], player: usize) -> f64 {
    let strategy = tree.resolve(profile);
    best_response_value_resolved(tree, &strategy, player)
}

/// A pure best response for `player`, defined on all of its infosets.
pub fn best_response_policy(tree: &GameTree, profile: [&dyn Policy; 2], player: usize) -> TabularPolicy {
    let strategy = tree.resolve(profile);
    let mut solver = Solver::new(tree, &strategy, player);
    solver.value(tree.root());
    tree.infosets()
        .iter()
        .enumerate()
        .filter(|(_, info)| info.player == player)
        .map(|(i, info)| {
            let a = solver.choose(i);
            let mut row = vec![0.0; info.legal.len()];
            row[a] = 1.0;
            (info.key.clone(), row)
        })
        .collect()
}
