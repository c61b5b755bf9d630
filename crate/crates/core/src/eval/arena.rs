use crate::agents::{play_episode, PolicyPlayer};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::policy::Policy;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CHUNK: u64 = 4096;

/// Outcome counts from the first seat's point of view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchReport {
    pub episodes: u64,
    pub wins: u64,
    pub losses: u64,
    pub draws: u64,
    pub win_rate: f64,
    pub loss_rate: f64,
    pub draw_rate: f64,
    pub avg_payoff: f64,
}

#[derive(Default)]
struct Tally {
    wins: u64,
    losses: u64,
    draws: u64,
    payoff: f64,
}

/// Play `episodes` games with `a` in the first seat and `b` in the second.
///
/// Episodes are split into fixed chunks, each with its own ChaCha stream
/// derived from `seed`, and merged in chunk order, so the result does not
/// depend on the thread count.
pub fn arena(game: &dyn Game, a: &dyn Policy, b: &dyn Policy, episodes: u64, seed: u64) -> Result<MatchReport> {
    if episodes == 0 {
        return Err(Error::InvalidArgument("arena needs at least one episode".into()));
    }
    let chunks = episodes.div_ceil(CHUNK);
    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let n = CHUNK.min(episodes - chunk * CHUNK);
            let mut t = Tally::default();
            for _ in 0..n {
                let mut pa = PolicyPlayer(a);
                let mut pb = PolicyPlayer(b);
                let payoff = play_episode(game, [&mut pa, &mut pb], &mut rng)?[0];
                t.payoff += payoff;
                if payoff > 0.0 {
                    t.wins += 1;
                } else if payoff < 0.0 {
                    t.losses += 1;
                } else {
                    t.draws += 1;
                }
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let total = tallies.into_iter().fold(Tally::default(), |acc, t| Tally {
        wins: acc.wins + t.wins,
        losses: acc.losses + t.losses,
        draws: acc.draws + t.draws,
        payoff: acc.payoff + t.payoff,
    });
    let n = episodes as f64;
    Ok(MatchReport {
        episodes,
        wins: total.wins,
        losses: total.losses,
        draws: total.draws,
        win_rate: total.wins as f64 / n,
        loss_rate: total.losses as f64 / n,
        draw_rate: total.draws as f64 / n,
        avg_payoff: total.payoff / n,
    })
}
