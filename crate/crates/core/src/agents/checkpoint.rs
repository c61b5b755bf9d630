//! Agent checkpoint directories.
//!
//! ```text
//! meta            key=value lines: variant, alpha, backend, game, player, episodes, seed, ...
//! average.txt     average policy (counts table or classifier)
//! q.est           Q estimator
//! q_target.est    target estimator (nfsp)
//! v.est           value estimator (arm-nfsp)
//! regrets.tsv     cumulative regrets `key<TAB>r1,r2,...` (arm-nfsp)
//! ```

use super::agent::{Agent, AgentConfig, AgentStats, Algorithm, BestResponse};
use super::average::AveragePolicy;
use crate::approx::Estimator;
use crate::error::{Error, Result};
use crate::game::GameRef;
use crate::games::GameKind;
use crate::regret::ArmLearner;
use super::qlearn::QLearner;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Checkpoint(format!("{}: {e}", path.display()))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| io(&path, e))
}

fn read(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|e| io(&path, e))
}

/// Parsed `meta` file.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta(pub BTreeMap<String, String>);

impl Meta {
    pub fn get(&self, key: &str) -> Result<&str> {
        self.0.get(key).map(String::as_str).ok_or_else(|| Error::Checkpoint(format!("meta lacks `{key}`")))
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.parse().map_err(|_| Error::Checkpoint(format!("meta `{key}` is malformed")))
    }

    pub fn game(&self) -> Result<GameKind> {
        self.get("game")?.parse()
    }
}

pub fn read_meta(dir: &Path) -> Result<Meta> {
    let text = read(dir, "meta")?;
    let map = text
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Checkpoint(format!("bad meta line `{l}`")))
        })
        .collect::<Result<_>>()?;
    Ok(Meta(map))
}

/// Write everything needed to evaluate or resume `agent`.
pub fn save_agent(agent: &Agent, dir: &Path, seed: u64) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let c = agent.config();
    let s = agent.stats();
    let meta = format!(
        "variant={}\nalpha={}\nbackend={}\ngame={}\nplayer={}\nepisodes={}\nseed={}\n\
         best_response_episodes={}\ntransitions={}\nrl_updates={}\narm_updates={}\nsl_updates={}\nbr_iterations={}\n",
        c.algorithm,
        c.alpha,
        c.backend,
        agent.game().name(),
        agent.player(),
        s.episodes,
        seed,
        s.best_response_episodes,
        s.transitions,
        s.rl_updates,
        s.arm_updates,
        s.sl_updates,
        match agent.best_response() {
            BestResponse::Q(q) => q.updates(),
            BestResponse::Arm(a) => a.iterations(),
        },
    );
    write(dir, "meta", &meta)?;
    write(dir, "average.txt", &agent.average_policy().to_text())?;
    for (name, est) in agent.estimators() {
        write(dir, name, &est.to_checkpoint())?;
    }
    if let Some(arm) = agent.arm_learner() {
        write(dir, "regrets.tsv", &arm.regrets_to_text())?;
    }
    Ok(())
}

/// Write a policy-only checkpoint (no learner state) for `player`.
pub fn save_average_policy(policy: &AveragePolicy, dir: &Path, player: usize, label: &str) -> Result<()> {
    if player > 1 {
        return Err(Error::InvalidPlayer(player));
    }
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let meta = format!("variant={label}\ngame={}\nplayer={player}\nepisodes=0\nseed=0\n", policy.game().name());
    write(dir, "meta", &meta)?;
    write(dir, "average.txt", &policy.to_text())
}

/// Only the average policy of a checkpoint, checked against `game`.
pub fn load_average_policy(dir: &Path, game: &GameRef) -> Result<AveragePolicy> {
    let meta = read_meta(dir)?;
    let kind = meta.game()?;
    if kind != game.kind() {
        return Err(Error::Checkpoint(format!(
            "checkpoint {} was trained on {kind}, not {}",
            dir.display(),
            game.name()
        )));
    }
    AveragePolicy::from_text(game.clone(), &read(dir, "average.txt")?)
}

/// Rebuild an agent from a checkpoint. Replay memories are not saved, so
/// they start empty.
pub fn load_agent(dir: &Path, game: GameRef, config: AgentConfig) -> Result<Agent> {
    let meta = read_meta(dir)?;
    let average = load_average_policy(dir, &game)?;
    let algorithm: Algorithm = meta.get("variant")?.parse()?;
    if algorithm != config.algorithm {
        return Err(Error::Checkpoint(format!("checkpoint variant is {algorithm}, config says {}", config.algorithm)));
    }
    let player: usize = meta.parse("player")?;
    let seed: u64 = meta.parse("seed")?;
    let mut agent = Agent::new(game.clone(), player, config.clone(), seed)?;
    let iterations: u64 = meta.parse("br_iterations")?;
    let q = Estimator::from_checkpoint(&read(dir, "q.est")?)?;
    let best = match algorithm {
        Algorithm::Nfsp => {
            let target = Estimator::from_checkpoint(&read(dir, "q_target.est")?)?;
            let mut learner = QLearner::new(game, config.backend, config.rl_lr, config.target_sync, config.mlp, seed);
            learner.load(q, target, iterations)?;
            BestResponse::Q(learner)
        }
        Algorithm::ArmNfsp => {
            let v = Estimator::from_checkpoint(&read(dir, "v.est")?)?;
            let mut learner = ArmLearner::new(game, config.arm(), seed);
            learner.load_estimators(q, v, iterations)?;
            learner.load_regrets(&read(dir, "regrets.tsv")?)?;
            BestResponse::Arm(learner)
        }
    };
    let stats = AgentStats {
        episodes: meta.parse("episodes")?,
        best_response_episodes: meta.parse("best_response_episodes")?,
        transitions: meta.parse("transitions")?,
        rl_updates: meta.parse("rl_updates")?,
        arm_updates: meta.parse("arm_updates")?,
        sl_updates: meta.parse("sl_updates")?,
        ..AgentStats::default()
    };
    agent.restore(best, average, stats);
    Ok(agent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::selfplay::{run_selfplay, SelfPlayConfig};
    use crate::approx::Backend;
    use crate::games::build_game;
    use crate::policy::{Policy, TabularPolicy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scratch(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("eqlab-ckpt-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn roundtrip_preserves_policies() {
        for algorithm in [Algorithm::Nfsp, Algorithm::ArmNfsp] {
            for backend in [Backend::Tabular, Backend::Mlp] {
                let game = build_game(GameKind::Kuhn);
                let config = AgentConfig {
                    algorithm,
                    backend,
                    alpha: 0.5,
                    update_every: 16,
                    batch: 16,
                    arm_batch: 16,
                    ..AgentConfig::default()
                };
                let mk = |p| Agent::new(game.clone(), p, config.clone(), 5).unwrap();
                let mut agents = [mk(0), mk(1)];
                let mut rng = ChaCha8Rng::seed_from_u64(2);
                run_selfplay(&*game, &mut agents, SelfPlayConfig { episodes: 300, eval_every: 0 }, &mut rng, |_, _| Ok(()))
                    .unwrap();
                let dir = scratch(&format!("{algorithm}-{backend}"));
                save_agent(&agents[0], &dir, 5).unwrap();
                let back = load_agent(&dir, game.clone(), config.clone()).unwrap();
                for info in crate::tree::GameTree::build(game.clone()).infosets().iter().filter(|i| i.player == 0) {
                    assert_eq!(
                        back.action_probabilities(&info.key, &info.legal),
                        agents[0].action_probabilities(&info.key, &info.legal)
                    );
                }
                assert_eq!(back.stats().episodes, 300);
                if let (Some(a), Some(b)) = (agents[0].arm_learner(), back.arm_learner()) {
                    assert_eq!(a.regrets(), b.regrets());
                }
                let _ = fs::remove_dir_all(&dir);
            }
        }
    }

    #[test]
    fn wrong_game_is_rejected() {
        let kuhn = build_game(GameKind::Kuhn);
        let agent = Agent::new(kuhn, 0, AgentConfig::default(), 0).unwrap();
        let dir = scratch("mismatch");
        save_agent(&agent, &dir, 0).unwrap();
        let err = load_average_policy(&dir, &build_game(GameKind::Leduc)).unwrap_err();
        assert!(err.to_string().contains("kuhn"), "{err}");
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn policy_only_checkpoint_roundtrip() {
        let game = build_game(GameKind::Kuhn);
        let table: TabularPolicy = [(crate::game::InfoStateKey::new("0:0:"), vec![2.0 / 3.0, 1.0 / 3.0])].into_iter().collect();
        let policy = AveragePolicy::from_policy(game.clone(), &table).unwrap();
        let dir = scratch("policy");
        save_average_policy(&policy, &dir, 0, "analytic").unwrap();
        assert_eq!(read_meta(&dir).unwrap().get("variant").unwrap(), "analytic");
        let back = load_average_policy(&dir, &game).unwrap();
        let key = crate::game::InfoStateKey::new("0:0:");
        assert_eq!(back.distribution(&key, &[0, 1]), policy.distribution(&key, &[0, 1]));
        assert!(save_average_policy(&policy, &dir, 2, "x").is_err());
        let _ = fs::remove_dir_all(&dir);
    }
}
