//! Liar's Dice, one six-sided die per player.
//!
//! Bids are `(quantity, face)` with quantity in 1..=2 and face in 1..=6,
//! ordered by quantity then face; bid id is `6 * (quantity - 1) + face - 1`.
//! Action 12 calls "liar" on the last bid. Every new bid must exceed the
//! previous one, and "liar" is legal once a bid exists. Player 0 bids first.
//! On a challenge the dice are revealed: if at least `quantity` dice show
//! `face` the bidder wins (+1) and the challenger loses (-1), otherwise the
//! reverse. There are no wild faces.
//!
//! History: `[die0, die1, bids..., liar]` with dice stored as `face - 1`.
//! Key: `<player>:<face>:<comma-separated bid ids>`, e.g. `1:4:0,7`.
//!
//! Feature layout (32 entries):
//!
//! | index  | meaning                          |
//! |--------|----------------------------------|
//! | 0..2   | acting player one-hot            |
//! | 2..8   | own die face one-hot (1..=6)     |
//! | 8..20  | bids made by player 0, by bid id |
//! | 20..32 | bids made by player 1, by bid id |

use super::{one_hot, split_key, GameKind};
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, InfoStateKey, Node, Payoff};

pub const NUM_BIDS: ActionId = 12;
pub const LIAR: ActionId = 12;

#[derive(Debug, Clone, Copy, Default)]
pub struct LiarsDice;

/// `(quantity, face)` of a bid id.
pub fn bid_value(bid: ActionId) -> (u32, u32) {
    (bid / 6 + 1, bid % 6 + 1)
}

impl Game for LiarsDice {
    fn kind(&self) -> GameKind {
        GameKind::LiarsDice
    }

    fn num_distinct_actions(&self) -> usize {
        13
    }

    fn max_game_length(&self) -> usize {
        2 + NUM_BIDS as usize + 1
    }

    fn payoff_bounds(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn feature_len(&self) -> usize {
        32
    }

    fn node(&self, history: &[ActionId]) -> Node {
        match history {
            [] | [_] => Node::Chance((0..6).map(|f| (f, 1.0 / 6.0)).collect()),
            [dice @ .., bid, LIAR] => {
                let len = history.len();
                // history = [d0, d1, bids..., liar]; the liar call is action index len-3
                let challenger = (len - 3) % 2;
                let bidder = 1 - challenger;
                let (quantity, face) = bid_value(*bid);
                let count = [dice[0], dice[1]].iter().filter(|&&d| d + 1 == face).count() as u32;
                let mut pay = [0.0; 2];
                let winner = if count >= quantity { bidder } else { challenger };
                pay[winner] = 1.0;
                pay[1 - winner] = -1.0;
                Node::Terminal(Payoff(pay))
            }
            _ => {
                let player = history.len() % 2;
                let legal = match history.get(2..).and_then(|b| b.last()) {
                    None => (0..NUM_BIDS).collect(),
                    Some(&last) => (last + 1..NUM_BIDS).chain(std::iter::once(LIAR)).collect(),
                };
                Node::Decision { player, legal }
            }
        }
    }

    fn key_for(&self, history: &[ActionId], player: usize) -> InfoStateKey {
        let bids: Vec<String> = history[2..].iter().map(|b| b.to_string()).collect();
        InfoStateKey::new(format!("{player}:{}:{}", history[player] + 1, bids.join(",")))
    }

    fn encode_features(&self, key: &InfoStateKey) -> Result<Vec<f64>> {
        let foreign = || Error::ForeignKey { key: key.to_string(), game: "liars_dice" };
        let (player, face, bids) = split_key(key, "liars_dice")?;
        let face: usize = face.parse().ok().filter(|f| (1..=6).contains(f)).ok_or_else(foreign)?;
        let mut f = vec![0.0; 32];
        one_hot(&mut f, player);
        one_hot(&mut f, 1 + face);
        if !bids.is_empty() {
            let mut last = None;
            for (i, bid) in bids.split(',').enumerate() {
                let bid: usize =
                    bid.parse().ok().filter(|b| *b < NUM_BIDS as usize).ok_or_else(foreign)?;
                if last.is_some_and(|l| bid <= l) {
                    return Err(foreign());
                }
                last = Some(bid);
                one_hot(&mut f, 8 + 12 * (i % 2) + bid);
            }
        }
        Ok(f)
    }

    fn action_label(&self, action: ActionId) -> String {
        if action == LIAR {
            "liar".into()
        } else {
            let (q, f) = bid_value(action);
            format!("{q}x{f}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn die_roll_is_uniform() {
        let g = LiarsDice;
        let outcomes = g.chance_outcomes(&g.initial_state()).unwrap();
        assert_eq!(outcomes.len(), 6);
        assert!(outcomes.iter().all(|&(_, p)| p == 1.0 / 6.0));
    }

    #[test]
    fn bids_must_rise_and_liar_needs_a_bid() {
        assert_eq!(LiarsDice.node(&[0, 1]), Node::Decision { player: 0, legal: (0..12).collect() });
        assert_eq!(LiarsDice.node(&[0, 1, 10]), Node::Decision { player: 1, legal: vec![11, LIAR] });
    }

    #[test]
    fn challenge_resolution() {
        // dice 2 and 2; player 0 bids two 2s (id 7); player 1 calls liar and loses
        assert_eq!(LiarsDice.node(&[1, 1, 7, LIAR]), Node::Terminal(Payoff([1.0, -1.0])));
        // dice 2 and 3; two 2s is false
        assert_eq!(LiarsDice.node(&[1, 2, 7, LIAR]), Node::Terminal(Payoff([-1.0, 1.0])));
        // player 1 bids one 3 (id 2) over one 1, player 0 challenges and loses
        assert_eq!(LiarsDice.node(&[0, 2, 0, 2, LIAR]), Node::Terminal(Payoff([-1.0, 1.0])));
    }

    #[test]
    fn key_and_features_golden() {
        let key = LiarsDice.key_for(&[3, 4, 0, 7], 0);
        assert_eq!(key.as_str(), "0:4:0,7");
        let f = LiarsDice.encode_features(&key).unwrap();
        let mut expected = vec![0.0; 32];
        for i in [0, 5, 8, 20 + 7] {
            expected[i] = 1.0;
        }
        assert_eq!(f, expected);
        assert!(LiarsDice.encode_features(&InfoStateKey::new("0:4:7,0")).is_err());
    }
}
