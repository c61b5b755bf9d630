//! Locating and loading average-policy checkpoints for evaluation.

use anyhow::{bail, Result};
use eqlab::agents::checkpoint::{load_average_policy, read_meta, Meta};
use eqlab::agents::AveragePolicy;
use eqlab::{build_game, GameKind, GameRef, Policy};
use std::path::{Path, PathBuf};

/// Average policies for both seats plus the metadata of the first.
pub struct Profile {
    pub game: GameRef,
    pub meta: Meta,
    seats: Vec<AveragePolicy>,
}

impl Profile {
    /// Policy for `seat`. A single-directory checkpoint serves both seats.
    pub fn seat(&self, seat: usize) -> &dyn Policy {
        &self.seats[seat.min(self.seats.len() - 1)]
    }

    pub fn label(&self) -> String {
        self.meta.get("variant").unwrap_or("policy").to_string()
    }
}

/// Directories holding the policy for each seat.
///
/// Accepted layouts: a directory with `player0/` and `player1/`, a
/// training run directory (its `checkpoints/final`), or a single agent or
/// policy directory with a `meta` file.
fn seat_dirs(path: &Path) -> Result<Vec<PathBuf>> {
    for base in [path.to_path_buf(), path.join("checkpoints/final")] {
        let pair = [base.join("player0"), base.join("player1")];
        if pair.iter().all(|d| d.join("meta").is_file()) {
            return Ok(pair.to_vec());
        }
    }
    if path.join("meta").is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    bail!("{} is not a checkpoint directory", path.display())
}

/// Load a profile, checking it against `expected` when given.
pub fn load_profile(path: &Path, expected: Option<GameKind>) -> Result<Profile> {
    let dirs = seat_dirs(path)?;
    let meta = read_meta(&dirs[0])?;
    let kind = meta.game()?;
    let game = build_game(expected.unwrap_or(kind));
    let seats = dirs.iter().map(|d| load_average_policy(d, &game)).collect::<Result<Vec<_>, _>>()?;
    Ok(Profile { game, meta, seats })
}
