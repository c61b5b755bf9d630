use crate::config::TrainConfig;
use crate::csv::{fmt_g, CsvWriter, CURVE_HEADER};
use crate::log::Logger;
use crate::manifest::{write_manifest, RUN_LOG};
use anyhow::{Context, Result};
use eqlab::agents::checkpoint::save_agent;
use eqlab::agents::{run_selfplay, Agent, SelfPlayConfig};
use eqlab::eval::exploitability;
use eqlab::tree::GameTree;
use eqlab::build_game;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const CURVE_FILE: &str = "curve.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub seed: u64,
    pub final_exploitability: f64,
    pub rows: usize,
}

pub fn run_dir(config: &TrainConfig) -> PathBuf {
    config.out.join(format!("seed-{}", config.seed))
}

fn save_profile(agents: &[Agent; 2], dir: &Path, seed: u64) -> Result<()> {
    for agent in agents {
        save_agent(agent, &dir.join(format!("player{}", agent.player())), seed)?;
    }
    Ok(())
}

/// One training run into `out/seed-<seed>/`:
///
/// ```text
/// curve.csv                      exploitability of the average profile per eval point
/// checkpoints/ep-<N>/player{0,1} periodic checkpoints
/// checkpoints/final/player{0,1}  final checkpoint
/// run.log                        timestamped log
/// manifest.txt                   resolved config and output hashes
/// ```
pub fn train(config: &TrainConfig) -> Result<RunSummary> {
    let dir = run_dir(config);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    // checkpoints of an earlier run in the same directory would otherwise
    // end up in this run's manifest
    let old = dir.join("checkpoints");
    if old.is_dir() {
        std::fs::remove_dir_all(&old).with_context(|| format!("clearing {}", old.display()))?;
    }
    let mut log = Logger::to_file(&dir.join(RUN_LOG), format!("[seed {}] ", config.seed))?;
    log.line(format!("training {} {} into {}", config.algorithm(), config.game, dir.display()));
    for line in config.to_text().lines() {
        log.line(format!("config {line}"));
    }

    let game = build_game(config.game);
    let tree = GameTree::build(game.clone());
    let agent_config = config.agent_config();
    let mut agents = [
        Agent::new(game.clone(), 0, agent_config.clone(), config.seed)?,
        Agent::new(game.clone(), 1, agent_config, config.seed)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut curve = CsvWriter::create(&dir.join(CURVE_FILE), CURVE_HEADER)?;
    let mut rows = 0;
    let mut last = f64::NAN;
    let mut failure = None;
    let started = Instant::now();
    let selfplay = SelfPlayConfig { episodes: config.episodes, eval_every: config.eval_every };
    let outcome = run_selfplay(&*game, &mut agents, selfplay, &mut rng, |episode, agents| {
        let report = exploitability(&tree, [&agents[0], &agents[1]]);
        last = report.exploitability;
        let row = [
            episode.to_string(),
            fmt_g(report.exploitability),
            config.algorithm().to_string(),
            game.name().to_string(),
            config.seed.to_string(),
        ];
        let mut step = || -> Result<()> {
            curve.row(&row)?;
            if config.checkpoint_every > 0 && episode % config.checkpoint_every == 0 && episode < config.episodes {
                save_profile(agents, &dir.join(format!("checkpoints/ep-{episode}")), config.seed)?;
            }
            Ok(())
        };
        if let Err(e) = step() {
            failure = Some(e);
            return Err(eqlab::Error::InvalidArgument("run aborted".into()));
        }
        rows += 1;
        log.line(format!(
            "episode {episode} exploitability {} elapsed {:.1}s",
            fmt_g(report.exploitability),
            started.elapsed().as_secs_f64()
        ));
        Ok(())
    });
    if let Some(e) = failure {
        return Err(e);
    }
    outcome?;
    save_profile(&agents, &dir.join("checkpoints/final"), config.seed)?;
    write_manifest(&dir, config)?;
    log.line(format!("done: {rows} eval rows, final exploitability {}", fmt_g(last)));
    Ok(RunSummary { dir, seed: config.seed, final_exploitability: last, rows })
}

/// `k` runs with seeds `seed, seed + 1, ...`, in parallel.
pub fn train_seeds(config: &TrainConfig, k: u64) -> Vec<Result<RunSummary>> {
    (0..k)
        .into_par_iter()
        .map(|i| train(&TrainConfig { seed: config.seed.wrapping_add(i), ..config.clone() }))
        .collect()
}
