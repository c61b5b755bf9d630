use super::average::AveragePolicy;
use super::buffers::{legal_mask, Mode, NextState, RlBuffer, SlBuffer, SlItem, Transition};
use super::qlearn::QLearner;
use crate::approx::{Backend, Estimator, MlpConfig};
use crate::error::{Error, Result};
use crate::game::{ActionId, GameRef, InfoStateKey};
use crate::policy::{Distribution, Policy};
use crate::regret::{ArmConfig, ArmLearner};
use rand::Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Q-learning best response.
    Nfsp,
    /// Regret-matching best response.
    ArmNfsp,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Nfsp => "nfsp",
            Algorithm::ArmNfsp => "arm-nfsp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nfsp" => Ok(Algorithm::Nfsp),
            "arm-nfsp" | "arm_nfsp" => Ok(Algorithm::ArmNfsp),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm `{s}` (nfsp, arm-nfsp)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    pub algorithm: Algorithm,
    /// Probability of a best-response episode.
    pub alpha: f64,
    pub backend: Backend,
    /// Q-learning step size.
    pub rl_lr: f64,
    /// Classifier step size (mlp average policy only).
    pub sl_lr: f64,
    pub arm_q_lr: f64,
    pub arm_v_lr: f64,
    /// Updates run every this many recorded transitions.
    pub update_every: usize,
    pub batch: usize,
    /// Transitions required per regret update.
    pub arm_batch: usize,
    pub rl_capacity: usize,
    pub sl_capacity: usize,
    pub target_sync: u64,
    pub eps_start: f64,
    pub eps_end: f64,
    /// Starting ε of the exploration mixed into regret-matching play; it
    /// anneals to `eps_end` on the same schedule.
    pub arm_eps_start: f64,
    /// Episodes over which ε is annealed linearly.
    pub anneal_episodes: u64,
    pub mlp: MlpConfig,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            algorithm: Algorithm::ArmNfsp,
            alpha: 0.1,
            backend: Backend::Tabular,
            rl_lr: 0.1,
            sl_lr: 0.01,
            arm_q_lr: 0.1,
            arm_v_lr: 0.1,
            update_every: 128,
            batch: 128,
            arm_batch: 128,
            rl_capacity: 200_000,
            sl_capacity: 2_000_000,
            target_sync: 300,
            eps_start: 0.06,
            eps_end: 0.001,
            arm_eps_start: 0.02,
            anneal_episodes: 1_000_000,
            mlp: MlpConfig::default(),
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidArgument(what));
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha {} outside [0, 1]", self.alpha));
        }
        for (name, v) in [("rl_lr", self.rl_lr), ("sl_lr", self.sl_lr), ("arm_q_lr", self.arm_q_lr), ("arm_v_lr", self.arm_v_lr)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [
            ("update_every", self.update_every),
            ("batch", self.batch),
            ("arm_batch", self.arm_batch),
            ("rl_capacity", self.rl_capacity),
            ("sl_capacity", self.sl_capacity),
        ] {
            if v == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if [self.eps_start, self.eps_end, self.arm_eps_start].iter().any(|e| !(0.0..=1.0).contains(e)) {
            return bad("epsilon outside [0, 1]".into());
        }
        Ok(())
    }

    pub fn arm(&self) -> ArmConfig {
        ArmConfig {
            backend: self.backend,
            q_lr: self.arm_q_lr,
            v_lr: self.arm_v_lr,
            batch: self.arm_batch,
            mlp: self.mlp,
        }
    }
}

#[derive(Debug, Clone)]
pub enum BestResponse {
    Q(QLearner),
    Arm(ArmLearner),
}

/// Counters for what the agent has done so far.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AgentStats {
    pub episodes: u64,
    pub best_response_episodes: u64,
    pub transitions: u64,
    pub rl_updates: u64,
    pub arm_updates: u64,
    pub sl_updates: u64,
    pub last_rl_loss: f64,
    pub last_sl_loss: f64,
}

/// One seat of self-play: a best-response learner, an average policy and
/// the two memories.
#[derive(Debug, Clone)]
pub struct Agent {
    player: usize,
    game: GameRef,
    config: AgentConfig,
    best: BestResponse,
    average: AveragePolicy,
    rl: RlBuffer,
    sl: SlBuffer,
    mode: Option<Mode>,
    episode: Vec<Transition>,
    arm_pending: Vec<Transition>,
    since_update: usize,
    stats: AgentStats,
}

impl Agent {
    pub fn new(game: GameRef, player: usize, config: AgentConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        if player > 1 {
            return Err(Error::InvalidPlayer(player));
        }
        let seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(player as u64);
        let best = match config.algorithm {
            Algorithm::Nfsp => BestResponse::Q(QLearner::new(
                game.clone(),
                config.backend,
                config.rl_lr,
                config.target_sync,
                config.mlp,
                seed,
            )),
            Algorithm::ArmNfsp => BestResponse::Arm(ArmLearner::new(game.clone(), config.arm(), seed)),
        };
        let average = match config.backend {
            Backend::Tabular => AveragePolicy::counts(game.clone()),
            Backend::Mlp => AveragePolicy::classifier(game.clone(), config.mlp, seed ^ 0xa11ce),
        };
        Ok(Agent {
            player,
            rl: RlBuffer::new(config.rl_capacity),
            sl: SlBuffer::new(config.sl_capacity),
            game,
            config,
            best,
            average,
            mode: None,
            episode: Vec::new(),
            arm_pending: Vec::new(),
            since_update: 0,
            stats: AgentStats::default(),
        })
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn game(&self) -> &GameRef {
        &self.game
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn stats(&self) -> AgentStats {
        self.stats
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn average_policy(&self) -> &AveragePolicy {
        &self.average
    }

    pub fn best_response(&self) -> &BestResponse {
        &self.best
    }

    pub fn rl_buffer(&self) -> &RlBuffer {
        &self.rl
    }

    pub fn sl_buffer(&self) -> &SlBuffer {
        &self.sl
    }

    /// Make the average policy reflect every stored best-response sample.
    pub fn flush_average(&mut self) {
        self.average.flush();
    }

    /// Exploration rate of best-response play at the current episode.
    pub fn epsilon(&self) -> f64 {
        let c = &self.config;
        let start = match c.algorithm {
            Algorithm::Nfsp => c.eps_start,
            Algorithm::ArmNfsp => c.arm_eps_start,
        };
        let frac = if c.anneal_episodes == 0 {
            1.0
        } else {
            (self.stats.episodes as f64 / c.anneal_episodes as f64).min(1.0)
        };
        start + (c.eps_end - start) * frac
    }

    /// Draw this episode's mode: best response with probability α.
    pub fn select_mode<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Mode> {
        if self.mode.is_some() {
            return Err(Error::InvalidArgument("episode already in progress".into()));
        }
        let u: f64 = rng.random();
        let mode = if u < self.config.alpha { Mode::BestResponse } else { Mode::Average };
        self.mode = Some(mode);
        self.stats.episodes += 1;
        if mode == Mode::BestResponse {
            self.stats.best_response_episodes += 1;
        }
        Ok(mode)
    }

    /// The best-response policy the agent would follow at `key`.
    pub fn best_response_distribution(&self, key: &InfoStateKey, legal: &[ActionId]) -> Result<Distribution> {
        match &self.best {
            BestResponse::Q(q) => q.epsilon_greedy(key, legal, self.epsilon()),
            // same exploration schedule as the Q-learner; without it an
            // action dropped by regret matching is never re-estimated
            BestResponse::Arm(arm) => Ok(arm.arm_policy(key, legal).mix_uniform(self.epsilon())),
        }
    }

    /// Distribution for the current episode's mode.
    pub fn policy_distribution(&self, key: &InfoStateKey, legal: &[ActionId]) -> Result<Distribution> {
        match self.mode {
            None => Err(Error::NotReady("select_mode has not been called for this episode".into())),
            Some(Mode::BestResponse) => self.best_response_distribution(key, legal),
            Some(Mode::Average) => Ok(self.average.distribution(key, legal)),
        }
    }

    /// Sample an action for the current mode. Best-response choices are
    /// also stored in the supervised memory.
    pub fn step<R: Rng + ?Sized>(&mut self, key: &InfoStateKey, legal: &[ActionId], rng: &mut R) -> Result<ActionId> {
        if legal.is_empty() {
            return Err(Error::NoLegalActions);
        }
        let mode = self.mode.ok_or_else(|| Error::NotReady("select_mode has not been called".into()))?;
        let dist = self.policy_distribution(key, legal)?;
        let action = legal[dist.sample_index(rng)];
        if let Some(prev) = self.episode.last_mut() {
            prev.next = Some(NextState { key: key.clone(), legal: legal.to_vec() });
        }
        self.episode.push(Transition {
            key: key.clone(),
            legal: legal.to_vec(),
            action,
            reward: 0.0,
            next: None,
            episode: self.stats.episodes,
            ret: 0.0,
            mode,
        });
        if mode == Mode::BestResponse {
            let item = SlItem { key: key.clone(), action, legal_mask: legal_mask(legal) };
            let outcome = self.sl.insert(item.clone(), rng);
            self.average.observe(&item, &outcome);
        }
        Ok(action)
    }

    /// Close the episode with this agent's payoff, store its transitions
    /// and run any updates that became due.
    pub fn end_episode<R: Rng + ?Sized>(&mut self, payoff: f64, rng: &mut R) -> Result<()> {
        if self.mode.take().is_none() {
            return Err(Error::NotReady("no episode in progress".into()));
        }
        if !payoff.is_finite() {
            return Err(Error::NonFinite("payoff"));
        }
        let mut steps = std::mem::take(&mut self.episode);
        if let Some(last) = steps.last_mut() {
            last.reward = payoff;
        }
        let mut ret = 0.0;
        for t in steps.iter_mut().rev() {
            ret += t.reward;
            t.ret = ret;
        }
        for t in steps {
            self.stats.transitions += 1;
            if self.config.algorithm == Algorithm::ArmNfsp {
                self.arm_pending.push(t.clone());
            }
            self.rl.push(t);
            self.since_update += 1;
            if self.since_update >= self.config.update_every {
                self.since_update = 0;
                self.update(rng)?;
            }
        }
        Ok(())
    }

    fn update<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        match &mut self.best {
            BestResponse::Q(q) => {
                if self.rl.len() >= self.config.batch {
                    let batch = self.rl.sample(self.config.batch, rng);
                    self.stats.last_rl_loss = q.rl_update(&batch)?.loss;
                    self.stats.rl_updates += 1;
                }
            }
            BestResponse::Arm(arm) => {
                if self.arm_pending.len() >= self.config.arm_batch {
                    let stats = arm.arm_update(&self.arm_pending)?;
                    self.stats.last_rl_loss = stats.q_loss;
                    self.stats.arm_updates += 1;
                    self.arm_pending.clear();
                }
            }
        }
        match self.average.sl_update(&self.sl, self.config.batch.min(self.sl.capacity()), self.config.sl_lr, rng) {
            Ok(loss) => {
                self.stats.last_sl_loss = loss;
                self.stats.sl_updates += 1;
                Ok(())
            }
            Err(Error::NotReady(_)) => Ok(()),
            Err(e) => Err(e),
        }
    }

    pub fn arm_learner(&self) -> Option<&ArmLearner> {
        match &self.best {
            BestResponse::Arm(a) => Some(a),
            BestResponse::Q(_) => None,
        }
    }

    pub fn q_learner(&self) -> Option<&QLearner> {
        match &self.best {
            BestResponse::Q(q) => Some(q),
            BestResponse::Arm(_) => None,
        }
    }

    pub(crate) fn restore(
        &mut self,
        best: BestResponse,
        average: AveragePolicy,
        stats: AgentStats,
    ) {
        self.best = best;
        self.average = average;
        self.stats = stats;
    }

    pub(crate) fn estimators(&self) -> Vec<(&'static str, &Estimator)> {
        match &self.best {
            BestResponse::Q(q) => vec![("q.est", q.estimator()), ("q_target.est", q.target())],
            BestResponse::Arm(a) => vec![("q.est", a.q()), ("v.est", a.v())],
        }
    }
}

/// The agent's average policy; this is what evaluation and arenas use.
impl Policy for Agent {
    fn action_probabilities(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        self.average.distribution(key, legal)
    }
}
