//! Training configuration: `key=value` files plus flag overrides.

use eqlab::agents::{AgentConfig, Algorithm};
use eqlab::approx::Backend;
use eqlab::GameKind;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

pub const SEED_ENV: &str = "EQLAB_SEED";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("line {line}: expected `key=value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("`{key}`: cannot parse `{value}` ({reason})")]
    Malformed { key: String, value: String, reason: String },
    #[error("`{key}` = {value} is out of range: expected {expected}")]
    OutOfRange { key: String, value: String, expected: &'static str },
}

/// Every recognised key with its help text. Flags are the kebab-case forms.
pub const KEYS: &[(&str, &str)] = &[
    ("game", "kuhn | leduc | liars_dice | tic_tac_toe"),
    ("algorithm", "nfsp | arm-nfsp"),
    ("episodes", "training episodes (>= 1)"),
    ("alpha", "probability of best-response mode per episode, in (0, 1)"),
    ("backend", "tabular | mlp"),
    ("rl_lr", "Q-learning rate (nfsp)"),
    ("sl_lr", "average-policy classifier learning rate (mlp backend)"),
    ("arm_q_lr", "regret learner Q learning rate"),
    ("arm_v_lr", "regret learner V learning rate"),
    ("update_every", "recorded transitions between updates"),
    ("batch", "minibatch size"),
    ("arm_batch", "transitions required per regret update"),
    ("rl_capacity", "circular replay memory capacity"),
    ("sl_capacity", "reservoir memory capacity"),
    ("target_sync", "Q updates between target-network syncs"),
    ("eps_start", "initial exploration of the Q-learner"),
    ("eps_end", "final exploration rate"),
    ("arm_eps_start", "initial exploration mixed into regret-matching play"),
    ("anneal_episodes", "episodes over which exploration anneals (default: episodes)"),
    ("hidden", "hidden units of the mlp backend"),
    ("eval_every", "episodes between exploitability evaluations"),
    ("checkpoint_every", "periodic checkpoint interval in episodes, 0 for final only"),
    ("seed", "random seed (falls back to EQLAB_SEED, then 0)"),
    ("out", "output directory"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub game: GameKind,
    pub episodes: u64,
    pub eval_every: u64,
    pub checkpoint_every: u64,
    pub seed: u64,
    pub out: PathBuf,
    /// `None` anneals over the whole run.
    pub anneal_episodes: Option<u64>,
    pub agent: AgentConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            game: GameKind::Kuhn,
            episodes: 100_000,
            eval_every: 10_000,
            checkpoint_every: 100_000,
            seed: 0,
            out: PathBuf::from("runs"),
            anneal_episodes: None,
            agent: AgentConfig::default(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: Display,
{
    value.trim().parse().map_err(|e: T::Err| ConfigError::Malformed {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn check<T: Display + Copy>(key: &str, v: T, ok: bool, expected: &'static str) -> Result<T, ConfigError> {
    if ok {
        Ok(v)
    } else {
        Err(ConfigError::OutOfRange { key: key.into(), value: v.to_string(), expected })
    }
}

fn at_least_one(key: &str, value: &str) -> Result<u64, ConfigError> {
    let v: u64 = parse(key, value)?;
    check(key, v, v >= 1, ">= 1")
}

fn count(key: &str, value: &str) -> Result<usize, ConfigError> {
    let v: usize = parse(key, value)?;
    check(key, v, v >= 1, ">= 1")
}

fn rate(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse(key, value)?;
    check(key, v, v > 0.0 && v.is_finite(), "a finite positive number")
}

fn probability(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse(key, value)?;
    check(key, v, (0.0..=1.0).contains(&v), "a number in [0, 1]")
}

/// `eval-every` and `eval_every` both name the same key.
pub fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl TrainConfig {
    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        let k = key.as_str();
        let a = &mut self.agent;
        match k {
            "game" => self.game = parse(k, value)?,
            "algorithm" => a.algorithm = parse(k, value)?,
            "episodes" => self.episodes = at_least_one(k, value)?,
            "alpha" => {
                let v: f64 = parse(k, value)?;
                a.alpha = check(k, v, v > 0.0 && v < 1.0, "a number in (0, 1)")?;
            }
            "backend" => a.backend = parse(k, value)?,
            "rl_lr" => a.rl_lr = rate(k, value)?,
            "sl_lr" => a.sl_lr = rate(k, value)?,
            "arm_q_lr" => a.arm_q_lr = rate(k, value)?,
            "arm_v_lr" => a.arm_v_lr = rate(k, value)?,
            "update_every" => a.update_every = count(k, value)?,
            "batch" => a.batch = count(k, value)?,
            "arm_batch" => a.arm_batch = count(k, value)?,
            "rl_capacity" => a.rl_capacity = count(k, value)?,
            "sl_capacity" => a.sl_capacity = count(k, value)?,
            "target_sync" => a.target_sync = at_least_one(k, value)?,
            "eps_start" => a.eps_start = probability(k, value)?,
            "eps_end" => a.eps_end = probability(k, value)?,
            "arm_eps_start" => a.arm_eps_start = probability(k, value)?,
            "anneal_episodes" => self.anneal_episodes = Some(at_least_one(k, value)?),
            "hidden" => a.mlp.hidden = count(k, value)?,
            "eval_every" => self.eval_every = at_least_one(k, value)?,
            "checkpoint_every" => self.checkpoint_every = parse(k, value)?,
            "seed" => self.seed = parse(k, value)?,
            "out" => {
                if value.trim().is_empty() {
                    return Err(ConfigError::Malformed { key, value: value.into(), reason: "empty path".into() });
                }
                self.out = PathBuf::from(value.trim());
            }
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Agent settings with the annealing horizon resolved.
    pub fn agent_config(&self) -> AgentConfig {
        AgentConfig { anneal_episodes: self.anneal_episodes.unwrap_or(self.episodes), ..self.agent.clone() }
    }

    pub fn algorithm(&self) -> Algorithm {
        self.agent.algorithm
    }

    pub fn backend(&self) -> Backend {
        self.agent.backend
    }

    /// Fully resolved configuration, one `key=value` per line in [`KEYS`]
    /// order. Parsing the text back yields the same configuration.
    pub fn to_text(&self) -> String {
        let a = self.agent_config();
        let values: Vec<String> = vec![
            self.game.to_string(),
            a.algorithm.to_string(),
            self.episodes.to_string(),
            a.alpha.to_string(),
            a.backend.to_string(),
            a.rl_lr.to_string(),
            a.sl_lr.to_string(),
            a.arm_q_lr.to_string(),
            a.arm_v_lr.to_string(),
            a.update_every.to_string(),
            a.batch.to_string(),
            a.arm_batch.to_string(),
            a.rl_capacity.to_string(),
            a.sl_capacity.to_string(),
            a.target_sync.to_string(),
            a.eps_start.to_string(),
            a.eps_end.to_string(),
            a.arm_eps_start.to_string(),
            a.anneal_episodes.to_string(),
            a.mlp.hidden.to_string(),
            self.eval_every.to_string(),
            self.checkpoint_every.to_string(),
            self.seed.to_string(),
            self.out.display().to_string(),
        ];
        KEYS.iter().zip(values).map(|((k, _), v)| format!("{k}={v}\n")).collect()
    }
}

/// Build a configuration from file text and ordered flag overrides.
///
/// Later sources win: defaults, then the file, then the flags. The seed
/// falls back to `env_seed` (the `EQLAB_SEED` value) when neither sets it.
pub fn parse_config(
    text: &str,
    overrides: &[(String, String)],
    env_seed: Option<&str>,
) -> Result<TrainConfig, ConfigError> {
    let mut config = TrainConfig::default();
    let mut seed_set = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: raw.into() })?;
        config.set(k, v)?;
        seed_set |= normalize_key(k) == "seed";
    }
    for (k, v) in overrides {
        config.set(k, v)?;
        seed_set |= normalize_key(k) == "seed";
    }
    if !seed_set {
        if let Some(v) = env_seed {
            config.seed = parse(SEED_ENV, v)?;
        }
    }
    config.agent.validate().map_err(|e| ConfigError::Malformed {
        key: "agent".into(),
        value: String::new(),
        reason: e.to_string(),
    })?;
    Ok(config)
}
