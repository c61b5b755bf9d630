use super::agent::Agent;
use crate::error::Result;
use crate::game::{ActionId, Game, InfoStateKey, Node};
use crate::policy::{Distribution, Policy};
use rand::Rng;

/// Anything that can occupy a seat for an episode.
pub trait Player {
    fn begin_episode(&mut self, rng: &mut dyn rand::RngCore) -> Result<()>;
    fn act(&mut self, key: &InfoStateKey, legal: &[ActionId], rng: &mut dyn rand::RngCore) -> Result<ActionId>;
    fn end_episode(&mut self, payoff: f64, rng: &mut dyn rand::RngCore) -> Result<()>;
}

impl Player for Agent {
    fn begin_episode(&mut self, rng: &mut dyn rand::RngCore) -> Result<()> {
        self.select_mode(rng).map(|_| ())
    }

    fn act(&mut self, key: &InfoStateKey, legal: &[ActionId], rng: &mut dyn rand::RngCore) -> Result<ActionId> {
        self.step(key, legal, rng)
    }

    fn end_episode(&mut self, payoff: f64, rng: &mut dyn rand::RngCore) -> Result<()> {
        Agent::end_episode(self, payoff, rng)
    }
}

/// A frozen policy in a seat; it never learns.
pub struct PolicyPlayer<'a>(pub &'a dyn Policy);

impl Player for PolicyPlayer<'_> {
    fn begin_episode(&mut self, _rng: &mut dyn rand::RngCore) -> Result<()> {
        Ok(())
    }

    fn act(&mut self, key: &InfoStateKey, legal: &[ActionId], rng: &mut dyn rand::RngCore) -> Result<ActionId> {
        Ok(legal[self.0.action_probabilities(key, legal).sample_index(rng)])
    }

    fn end_episode(&mut self, _payoff: f64, _rng: &mut dyn rand::RngCore) -> Result<()> {
        Ok(())
    }
}

/// Play one episode from the root; returns the terminal payoffs.
pub fn play_episode<R: Rng>(game: &dyn Game, seats: [&mut dyn Player; 2], rng: &mut R) -> Result<[f64; 2]> {
    let [p0, p1] = seats;
    let mut seats: [&mut dyn Player; 2] = [p0, p1];
    for s in seats.iter_mut() {
        s.begin_episode(rng)?;
    }
    let mut history = Vec::with_capacity(game.max_game_length());
    let payoff = loop {
        match game.node(&history) {
            Node::Terminal(p) => break p.0,
            Node::Chance(outcomes) => {
                let probs: Vec<f64> = outcomes.iter().map(|(_, p)| *p).collect();
                history.push(outcomes[Distribution::from_weights(&probs).sample_index(rng)].0);
            }
            Node::Decision { player, legal } => {
                let key = game.key_for(&history, player);
                let a = seats[player].act(&key, &legal, rng)?;
                history.push(a);
            }
        }
    };
    for (p, s) in seats.iter_mut().enumerate() {
        s.end_episode(payoff[p], rng)?;
    }
    Ok(payoff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelfPlayConfig {
    pub episodes: u64,
    /// Evaluation cadence in episodes; the last episode is always evaluated.
    pub eval_every: u64,
}

/// What a self-play run did.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelfPlayLog {
    pub episodes: u64,
    pub eval_points: Vec<u64>,
}

/// Episode stamps at which a run of `episodes` evaluates.
pub fn eval_points(episodes: u64, eval_every: u64) -> Vec<u64> {
    let mut points: Vec<u64> =
        episodes.checked_div(eval_every).map_or_else(Vec::new, |n| (1..=n).map(|k| k * eval_every).collect());
    if episodes > 0 && points.last() != Some(&episodes) {
        points.push(episodes);
    }
    points
}

/// Train two agents against each other, calling `on_eval` with the episode
/// stamp at every evaluation point. Queued average-policy changes are
/// applied first, so `on_eval` sees the exact empirical average.
pub fn run_selfplay<R, F>(
    game: &dyn Game,
    agents: &mut [Agent; 2],
    config: SelfPlayConfig,
    rng: &mut R,
    mut on_eval: F,
) -> Result<SelfPlayLog>
where
    R: Rng,
    F: FnMut(u64, &[Agent; 2]) -> Result<()>,
{
    let mut log = SelfPlayLog::default();
    let points = eval_points(config.episodes, config.eval_every);
    let mut next = points.iter().peekable();
    for episode in 1..=config.episodes {
        let [a0, a1] = agents;
        play_episode(game, [a0, a1], rng)?;
        log.episodes = episode;
        if next.peek() == Some(&&episode) {
            next.next();
            agents.iter_mut().for_each(Agent::flush_average);
            on_eval(episode, agents)?;
            log.eval_points.push(episode);
        }
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentConfig;
    use crate::games::{build_game, GameKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eval_schedule() {
        assert_eq!(eval_points(25, 10), vec![10, 20, 25]);
        assert_eq!(eval_points(20, 10), vec![10, 20]);
        assert_eq!(eval_points(5, 10), vec![5]);
        assert!(eval_points(0, 10).is_empty());
    }

    #[test]
    fn zero_episodes_leave_agents_untouched() {
        let game = build_game(GameKind::Kuhn);
        let mk = |p| Agent::new(game.clone(), p, AgentConfig::default(), 3).unwrap();
        let mut agents = [mk(0), mk(1)];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let log = run_selfplay(&*game, &mut agents, SelfPlayConfig { episodes: 0, eval_every: 10 }, &mut rng, |_, _| Ok(()))
            .unwrap();
        assert_eq!(log.episodes, 0);
        assert_eq!(agents[0].stats(), Default::default());
        assert!(agents[1].rl_buffer().is_empty());
    }
}
