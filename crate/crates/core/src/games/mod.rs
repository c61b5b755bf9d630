//! Bundled games and their feature encoders.
//!
//! | game          | actions                                   | features |
//! |---------------|-------------------------------------------|----------|
//! | `kuhn`        | pass=0, bet=1                             | 9        |
//! | `leduc`       | fold=0, call=1, raise=2                   | 42       |
//! | `liars_dice`  | bid (q,f) = 6(q-1)+(f-1) for 0..=11, liar=12 | 32    |
//! | `tic_tac_toe` | cell index 0..=8, row-major               | 27       |
//!
//! Exact feature layouts are documented in each game module.

mod kuhn;
mod leduc;
mod liars_dice;
mod tic_tac_toe;

pub use kuhn::Kuhn;
pub use leduc::Leduc;
pub use liars_dice::LiarsDice;
pub use tic_tac_toe::TicTacToe;

use crate::error::{Error, Result};
use crate::game::{Game, GameRef, InfoStateKey};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameKind {
    Kuhn,
    Leduc,
    LiarsDice,
    TicTacToe,
}

impl GameKind {
    pub const ALL: [GameKind; 4] =
        [GameKind::Kuhn, GameKind::Leduc, GameKind::LiarsDice, GameKind::TicTacToe];

    pub fn name(self) -> &'static str {
        match self {
            GameKind::Kuhn => "kuhn",
            GameKind::Leduc => "leduc",
            GameKind::LiarsDice => "liars_dice",
            GameKind::TicTacToe => "tic_tac_toe",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GameKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::UnknownGame {
            name: s.to_string(),
            supported: GameKind::ALL.map(GameKind::name).join(", "),
        })
    }
}

/// Static description of a bundled game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSpec {
    pub kind: GameKind,
    pub num_players: usize,
    pub payoff_bounds: (f64, f64),
    pub max_game_length: usize,
}

impl GameSpec {
    pub fn of(game: &dyn Game) -> Self {
        GameSpec {
            kind: game.kind(),
            num_players: game.num_players(),
            payoff_bounds: game.payoff_bounds(),
            max_game_length: game.max_game_length(),
        }
    }

    /// `max - min` of the payoff bounds.
    pub fn payoff_range(&self) -> f64 {
        self.payoff_bounds.1 - self.payoff_bounds.0
    }
}

pub fn build_game(kind: GameKind) -> GameRef {
    match kind {
        GameKind::Kuhn => Arc::new(Kuhn),
        GameKind::Leduc => Arc::new(Leduc),
        GameKind::LiarsDice => Arc::new(LiarsDice),
        GameKind::TicTacToe => Arc::new(TicTacToe),
    }
}

/// Build a game from its name (`kuhn`, `leduc`, `liars_dice`, `tic_tac_toe`).
pub fn build_game_by_name(name: &str) -> Result<GameRef> {
    name.parse().map(build_game)
}

/// Split a key into `(player, private, public)` fields, checking the player.
pub(crate) fn split_key<'k>(
    key: &'k InfoStateKey,
    game: &'static str,
) -> Result<(usize, &'k str, &'k str)> {
    let foreign = || Error::ForeignKey { key: key.to_string(), game };
    let mut parts = key.as_str().splitn(3, ':');
    let player = match parts.next() {
        Some("0") => 0,
        Some("1") => 1,
        _ => return Err(foreign()),
    };
    let private = parts.next().ok_or_else(foreign)?;
    let public = parts.next().ok_or_else(foreign)?;
    Ok((player, private, public))
}

pub(crate) fn one_hot(out: &mut [f64], index: usize) {
    out[index] = 1.0;
}
