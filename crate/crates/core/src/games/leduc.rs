//! Leduc poker.
//!
//! Deck of six cards, ids 0..=5 with rank `id / 2` (J, J, Q, Q, K, K). Each
//! player antes 1 and receives one private card. Two betting rounds with bet
//! sizes 2 and 4 and at most two raises per round; player 0 opens both rounds.
//! One public card is revealed between the rounds. A pair with the public
//! card beats any unpaired hand, otherwise the higher rank wins; equal ranks
//! split. Folding forfeits the folder's current contribution. Fold is only
//! offered when facing a bet.
//!
//! History: `[card0, card1, round1..., public, round2...]` with fold=0,
//! call=1, raise=2. Key: `<player>:<private><public or ->:<round1>[/<round2>]`
//! with actions rendered as `f`, `c`, `r`, e.g. `1:35:cr/c`.
//!
//! Feature layout (42 entries):
//!
//! | index  | meaning                                                  |
//! |--------|----------------------------------------------------------|
//! | 0..30  | betting history, `round * 15 + position * 3 + action`    |
//! | 30..36 | private card one-hot (card id)                           |
//! | 36..42 | public card one-hot (card id), zeros before it is dealt  |
//!
//! In the betting block `round` is 0 or 1, `position` is the index of the
//! action within its round (0..=4; the acting player is `position % 2` and
//! the raise count is the number of earlier raises in the round) and
//! `action` is fold/call/raise.

use super::{one_hot, split_key, GameKind};
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, InfoStateKey, Node, Payoff};

pub const FOLD: ActionId = 0;
pub const CALL: ActionId = 1;
pub const RAISE: ActionId = 2;

const NUM_CARDS: ActionId = 6;
const MAX_RAISES: u32 = 2;
const BET_SIZE: [f64; 2] = [2.0, 4.0];
const HISTORY_SLOTS: usize = 5;

#[derive(Debug, Clone, Copy, Default)]
pub struct Leduc;

/// Result of replaying a history through the betting rules.
struct Replay {
    cards: [ActionId; 2],
    public: Option<ActionId>,
    contrib: [f64; 2],
    round: usize,
    raises: u32,
    to_act: usize,
    facing_bet: bool,
    outcome: Outcome,
    rounds: [Vec<ActionId>; 2],
}

enum Outcome {
    /// A player decision is pending.
    Betting,
    /// Round one closed; the public card is next.
    DealPublic,
    Folded(usize),
    Showdown,
}

fn replay(history: &[ActionId]) -> Replay {
    let mut r = Replay {
        cards: [history[0], history[1]],
        public: None,
        contrib: [1.0, 1.0],
        round: 0,
        raises: 0,
        to_act: 0,
        facing_bet: false,
        outcome: Outcome::Betting,
        rounds: [Vec::new(), Vec::new()],
    };
    let mut actions_in_round = 0;
    for &a in &history[2..] {
        if let Outcome::DealPublic = r.outcome {
            r.public = Some(a);
            r.round = 1;
            r.raises = 0;
            r.to_act = 0;
            r.facing_bet = false;
            r.outcome = Outcome::Betting;
            actions_in_round = 0;
            continue;
        }
        let p = r.to_act;
        r.rounds[r.round].push(a);
        match a {
            FOLD => {
                r.outcome = Outcome::Folded(p);
                return r;
            }
            CALL => {
                r.contrib[p] = r.contrib[1 - p];
                if actions_in_round > 0 {
                    r.outcome = if r.round == 0 { Outcome::DealPublic } else { Outcome::Showdown };
                }
                r.facing_bet = false;
            }
            _ => {
                r.contrib[p] = r.contrib[1 - p] + BET_SIZE[r.round];
                r.raises += 1;
                r.facing_bet = true;
            }
        }
        actions_in_round += 1;
        r.to_act = 1 - p;
    }
    r
}

fn hand_strength(card: ActionId, public: ActionId) -> (bool, ActionId) {
    (card / 2 == public / 2, card / 2)
}

fn action_char(a: ActionId) -> char {
    match a {
        FOLD => 'f',
        CALL => 'c',
        _ => 'r',
    }
}

impl Game for Leduc {
    fn kind(&self) -> GameKind {
        GameKind::Leduc
    }

    fn num_distinct_actions(&self) -> usize {
        3
    }

    fn max_game_length(&self) -> usize {
        // two deals, four actions, public card, four actions
        11
    }

    fn payoff_bounds(&self) -> (f64, f64) {
        // ante + two round-one raises + two round-two raises
        (-13.0, 13.0)
    }

    fn feature_len(&self) -> usize {
        42
    }

    fn node(&self, history: &[ActionId]) -> Node {
        match history {
            [] => Node::Chance((0..NUM_CARDS).map(|c| (c, 1.0 / 6.0)).collect()),
            [c0] => Node::Chance((0..NUM_CARDS).filter(|c| c != c0).map(|c| (c, 0.2)).collect()),
            _ => {
                let r = replay(history);
                match r.outcome {
                    Outcome::DealPublic => Node::Chance(
                        (0..NUM_CARDS)
                            .filter(|c| !r.cards.contains(c))
                            .map(|c| (c, 0.25))
                            .collect(),
                    ),
                    Outcome::Folded(p) => {
                        let mut pay = [0.0; 2];
                        pay[p] = -r.contrib[p];
                        pay[1 - p] = r.contrib[p];
                        Node::Terminal(Payoff(pay))
                    }
                    Outcome::Showdown => {
                        let public = r.public.expect("showdown after public card");
                        let s0 = hand_strength(r.cards[0], public);
                        let s1 = hand_strength(r.cards[1], public);
                        let won = r.contrib[0];
                        Node::Terminal(Payoff(match s0.cmp(&s1) {
                            std::cmp::Ordering::Greater => [won, -won],
                            std::cmp::Ordering::Less => [-won, won],
                            std::cmp::Ordering::Equal => [0.0, 0.0],
                        }))
                    }
                    Outcome::Betting => {
                        let mut legal = Vec::with_capacity(3);
                        if r.facing_bet {
                            legal.push(FOLD);
                        }
                        legal.push(CALL);
                        if r.raises < MAX_RAISES {
                            legal.push(RAISE);
                        }
                        Node::Decision { player: r.to_act, legal }
                    }
                }
            }
        }
    }

    fn key_for(&self, history: &[ActionId], player: usize) -> InfoStateKey {
        let r = replay(history);
        let render = |acts: &[ActionId]| acts.iter().map(|&a| action_char(a)).collect::<String>();
        let key = match r.public {
            Some(c) => format!(
                "{player}:{}{c}:{}/{}",
                r.cards[player],
                render(&r.rounds[0]),
                render(&r.rounds[1])
            ),
            None => format!("{player}:{}-:{}", r.cards[player], render(&r.rounds[0])),
        };
        InfoStateKey::new(key)
    }

    fn encode_features(&self, key: &InfoStateKey) -> Result<Vec<f64>> {
        let foreign = || Error::ForeignKey { key: key.to_string(), game: "leduc" };
        let (_, cards, betting) = split_key(key, "leduc")?;
        let cards = cards.as_bytes();
        if cards.len() != 2 {
            return Err(foreign());
        }
        let card = |b: u8| -> Option<usize> {
            let c = b.checked_sub(b'0')? as usize;
            (c < NUM_CARDS as usize).then_some(c)
        };
        let private = card(cards[0]).ok_or_else(foreign)?;
        let public = match cards[1] {
            b'-' => None,
            b => Some(card(b).ok_or_else(foreign)?),
        };
        let rounds: Vec<&str> = betting.split('/').collect();
        if rounds.len() > 2 || (rounds.len() == 2) != public.is_some() {
            return Err(foreign());
        }
        let mut f = vec![0.0; 42];
        for (round, actions) in rounds.iter().enumerate() {
            if actions.len() > HISTORY_SLOTS {
                return Err(foreign());
            }
            for (pos, ch) in actions.chars().enumerate() {
                let a = match ch {
                    'f' => 0,
                    'c' => 1,
                    'r' => 2,
                    _ => return Err(foreign()),
                };
                one_hot(&mut f, round * 15 + pos * 3 + a);
            }
        }
        one_hot(&mut f, 30 + private);
        if let Some(c) = public {
            one_hot(&mut f, 36 + c);
        }
        Ok(f)
    }

    fn action_label(&self, action: ActionId) -> String {
        match action {
            FOLD => "fold".into(),
            CALL => "call".into(),
            _ => "raise".into(),
        }
    }
}
