//! Tic-Tac-Toe. Player 0 places X and moves first; cells are numbered 0..=8
//! row-major. Winner gets +1, loser -1, draw 0.
//!
//! Key: `<player>:<board>` with the board rendered as nine characters from
//! `.`, `x`, `o`, e.g. `1:x...o...x`. The game is Markov in the board, so the
//! board alone identifies the decision point.
//!
//! Feature layout (27 entries): `cell * 3 + state` with state 0 = empty,
//! 1 = X, 2 = O.

use super::GameKind;
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, InfoStateKey, Node, Payoff};

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

#[derive(Debug, Clone, Copy, Default)]
pub struct TicTacToe;

/// Board cells: 0 empty, 1 X, 2 O.
pub(crate) fn board(history: &[ActionId]) -> [u8; 9] {
    let mut b = [0u8; 9];
    for (i, &cell) in history.iter().enumerate() {
        b[cell as usize] = 1 + (i % 2) as u8;
    }
    b
}

pub(crate) fn winner(b: &[u8; 9]) -> Option<usize> {
    LINES.iter().find_map(|l| {
        let v = b[l[0]];
        (v != 0 && v == b[l[1]] && v == b[l[2]]).then(|| (v - 1) as usize)
    })
}

impl Game for TicTacToe {
    fn kind(&self) -> GameKind {
        GameKind::TicTacToe
    }

    fn num_distinct_actions(&self) -> usize {
        9
    }

    fn max_game_length(&self) -> usize {
        9
    }

    fn payoff_bounds(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn feature_len(&self) -> usize {
        27
    }

    fn node(&self, history: &[ActionId]) -> Node {
        let b = board(history);
        if let Some(w) = winner(&b) {
            let mut pay = [-1.0; 2];
            pay[w] = 1.0;
            return Node::Terminal(Payoff(pay));
        }
        if history.len() == 9 {
            return Node::Terminal(Payoff([0.0, 0.0]));
        }
        let legal = (0..9).filter(|&c| b[c as usize] == 0).collect();
        Node::Decision { player: history.len() % 2, legal }
    }

    fn key_for(&self, history: &[ActionId], player: usize) -> InfoStateKey {
        let cells: String = board(history)
            .iter()
            .map(|&c| match c {
                0 => '.',
                1 => 'x',
                _ => 'o',
            })
            .collect();
        InfoStateKey::new(format!("{player}:{cells}"))
    }

    fn encode_features(&self, key: &InfoStateKey) -> Result<Vec<f64>> {
        let foreign = || Error::ForeignKey { key: key.to_string(), game: "tic_tac_toe" };
        let s = key.as_str();
        let (player, cells) = s.split_once(':').ok_or_else(foreign)?;
        if !matches!(player, "0" | "1") || cells.len() != 9 {
            return Err(foreign());
        }
        let mut f = vec![0.0; 27];
        for (i, ch) in cells.chars().enumerate() {
            let state = match ch {
                '.' => 0,
                'x' => 1,
                'o' => 2,
                _ => return Err(foreign()),
            };
            f[i * 3 + state] = 1.0;
        }
        Ok(f)
    }
}
