//! Kuhn poker: three cards (J=0, Q=1, K=2), ante 1, one betting round with
//! bet size 1.
//!
//! History: `[card0, card1, betting...]` with pass=0, bet=1.
//! Key: `<player>:<card>:<betting as p/b>`, e.g. `0:2:pb`.
//!
//! Feature layout (9 entries):
//!
//! | index | meaning                          |
//! |-------|----------------------------------|
//! | 0..2  | acting player one-hot            |
//! | 2..5  | private card one-hot (J, Q, K)   |
//! | 5..7  | first betting action (pass, bet) |
//! | 7..9  | second betting action            |

use super::{one_hot, split_key, GameKind};
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, InfoStateKey, Node, Payoff};

pub const PASS: ActionId = 0;
pub const BET: ActionId = 1;

#[derive(Debug, Clone, Copy, Default)]
pub struct Kuhn;

fn showdown(cards: [ActionId; 2], pot_each: f64) -> Payoff {
    if cards[0] > cards[1] {
        Payoff([pot_each, -pot_each])
    } else {
        Payoff([-pot_each, pot_each])
    }
}

impl Game for Kuhn {
    fn kind(&self) -> GameKind {
        GameKind::Kuhn
    }

    fn num_distinct_actions(&self) -> usize {
        2
    }

    fn max_game_length(&self) -> usize {
        5
    }

    fn payoff_bounds(&self) -> (f64, f64) {
        (-2.0, 2.0)
    }

    fn feature_len(&self) -> usize {
        9
    }

    fn node(&self, history: &[ActionId]) -> Node {
        match history {
            [] => Node::Chance((0..3).map(|c| (c, 1.0 / 3.0)).collect()),
            [c0] => Node::Chance((0..3).filter(|c| c != c0).map(|c| (c, 0.5)).collect()),
            [c0, c1, betting @ ..] => {
                let cards = [*c0, *c1];
                match betting {
                    [] | [PASS, BET] => Node::Decision { player: 0, legal: vec![PASS, BET] },
                    [_] => Node::Decision { player: 1, legal: vec![PASS, BET] },
                    [PASS, PASS] => Node::Terminal(showdown(cards, 1.0)),
                    [BET, PASS] => Node::Terminal(Payoff([1.0, -1.0])),
                    [BET, BET] | [PASS, BET, BET] => Node::Terminal(showdown(cards, 2.0)),
                    [PASS, BET, PASS] => Node::Terminal(Payoff([-1.0, 1.0])),
                    _ => unreachable!("kuhn history out of range: {history:?}"),
                }
            }
        }
    }

    fn key_for(&self, history: &[ActionId], player: usize) -> InfoStateKey {
        let betting: String =
            history[2..].iter().map(|&a| if a == PASS { 'p' } else { 'b' }).collect();
        InfoStateKey::new(format!("{player}:{}:{betting}", history[player]))
    }

    fn encode_features(&self, key: &InfoStateKey) -> Result<Vec<f64>> {
        let foreign = || Error::ForeignKey { key: key.to_string(), game: "kuhn" };
        let (player, card, betting) = split_key(key, "kuhn")?;
        let card: usize = card.parse().ok().filter(|c| *c < 3).ok_or_else(foreign)?;
        if betting.len() > 2 {
            return Err(foreign());
        }
        let mut f = vec![0.0; 9];
        one_hot(&mut f, player);
        one_hot(&mut f, 2 + card);
        for (slot, ch) in betting.chars().enumerate() {
            let a = match ch {
                'p' => 0,
                'b' => 1,
                _ => return Err(foreign()),
            };
            one_hot(&mut f, 5 + 2 * slot + a);
        }
        Ok(f)
    }

    fn action_label(&self, action: ActionId) -> String {
        match action {
            PASS => "pass".into(),
            _ => "bet".into(),
        }
    }
}
