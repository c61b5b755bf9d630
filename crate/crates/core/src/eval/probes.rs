use super::{arena, best_response_value, profile_values};
use crate::agents::{play_episode, Agent, AgentConfig, PolicyPlayer};
use crate::error::{Error, Result};
use crate::game::{Game, GameRef};
use crate::policy::{Policy, UniformPolicy};
use crate::tree::GameTree;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seat {
    First,
    Second,
    /// Average of both seats, `episodes` games each.
    Both,
}

/// Mean payoff of `policy` against the uniform-random policy.
pub fn learning_curve_probe(game: &dyn Game, policy: &dyn Policy, episodes: u64, seat: Seat, seed: u64) -> Result<f64> {
    let first = || arena(game, policy, &UniformPolicy, episodes, seed).map(|r| r.avg_payoff);
    // zero-sum: the second seat earns the negation of the first seat's payoff
    let second = || arena(game, &UniformPolicy, policy, episodes, seed ^ 1).map(|r| -r.avg_payoff);
    match seat {
        Seat::First => first(),
        Seat::Second => second(),
        Seat::Both => Ok((first()? + second()?) / 2.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub episodes: u64,
    /// Seat of the learner; the opponent takes the other one.
    pub seat: usize,
    /// Episode stamps to measure at; empty means [`log_grid`].
    pub grid: Vec<u64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretPoint {
    pub episode: u64,
    /// Best-response value minus the value of the learner's empirical
    /// average strategy, both against the fixed opponent.
    pub regret: f64,
    pub br_value: f64,
    pub value: f64,
}

/// 1, 2, 5, 10, 20, 50, ... up to `t`, plus `t / 10` and `t`.
pub fn log_grid(t: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut decade = 1u64;
    while decade <= t {
        for m in [1, 2, 5] {
            if decade * m <= t {
                grid.push(decade * m);
            }
        }
        decade = decade.saturating_mul(10);
    }
    grid.extend([t / 10, t]);
    grid.retain(|&x| x > 0);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Train one agent in best-response mode only (`alpha = 1`) against a
/// fixed `opponent` and record the average external regret of its
/// empirical average strategy on a grid of episode counts.
pub fn fixed_opponent_regret_probe(
    game: GameRef,
    learner: &AgentConfig,
    opponent: &dyn Policy,
    config: &ProbeConfig,
) -> Result<Vec<RegretPoint>> {
    if config.seat > 1 {
        return Err(Error::InvalidPlayer(config.seat));
    }
    let tree = GameTree::build(game.clone());
    let mut agent = Agent::new(game.clone(), config.seat, AgentConfig { alpha: 1.0, ..learner.clone() }, config.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // the responder's own row of the profile is ignored
    let br_value = best_response_value(&tree, [opponent, opponent], config.seat);
    let mut grid = if config.grid.is_empty() { log_grid(config.episodes) } else { config.grid.clone() };
    grid.retain(|&e| e <= config.episodes);
    grid.sort_unstable();
    grid.dedup();

    let mut points = Vec::with_capacity(grid.len());
    let mut next = grid.iter().peekable();
    let measure = |agent: &mut Agent, episode: u64| {
        agent.flush_average();
        let mut profile: [&dyn Policy; 2] = [opponent, opponent];
        profile[config.seat] = agent.average_policy();
        let value = profile_values(&tree, profile)[config.seat];
        RegretPoint { episode, regret: br_value - value, br_value, value }
    };
    if next.peek() == Some(&&0) {
        next.next();
        points.push(measure(&mut agent, 0));
    }
    for episode in 1..=config.episodes {
        let mut fixed = PolicyPlayer(opponent);
        if config.seat == 0 {
            play_episode(&*game, [&mut agent, &mut fixed], &mut rng)?;
        } else {
            play_episode(&*game, [&mut fixed, &mut agent], &mut rng)?;
        }
        if next.peek() == Some(&&episode) {
            next.next();
            points.push(measure(&mut agent, episode));
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{build_game, GameKind};

    #[test]
    fn log_grid_includes_tenth_and_end() {
        assert_eq!(log_grid(100_000), vec![1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10_000, 20_000, 50_000, 100_000]);
        assert_eq!(log_grid(30), vec![1, 2, 3, 5, 10, 20, 30]);
        assert!(log_grid(0).is_empty());
    }

    #[test]
    fn uniform_policy_breaks_even_against_itself_on_both_seats() {
        let game = build_game(GameKind::Kuhn);
        let v = learning_curve_probe(&*game, &UniformPolicy, 50_000, Seat::Both, 3).unwrap();
        // per-seat sd is about 1.3 / sqrt(50k)
        assert!(v.abs() < 0.02, "{v}");
    }

    #[test]
    fn probe_rejects_bad_seat_and_measures_the_grid() {
        let game = build_game(GameKind::Kuhn);
        let config = ProbeConfig { episodes: 300, seat: 2, grid: vec![], seed: 1 };
        assert!(fixed_opponent_regret_probe(game.clone(), &AgentConfig::default(), &UniformPolicy, &config).is_err());
        let config = ProbeConfig { episodes: 300, seat: 0, grid: vec![0, 100, 300, 900], seed: 1 };
        let points = fixed_opponent_regret_probe(game, &AgentConfig::default(), &UniformPolicy, &config).unwrap();
        assert_eq!(points.iter().map(|p| p.episode).collect::<Vec<_>>(), vec![0, 100, 300]);
        for p in &points {
            assert!(p.regret >= -1e-12);
            assert!((p.br_value - p.value - p.regret).abs() < 1e-12);
        }
    }
}
