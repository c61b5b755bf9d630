//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p eqlab-cli --test acceptance`. Set
//! `EQLAB_ACCEPTANCE=3,4` to run a subset.

use eqlab::agents::{
    Agent, AgentConfig, Algorithm, Mode, NextState, QLearner, RlBuffer, SlBuffer, SlItem, Transition, run_selfplay,
    SelfPlayConfig,
};
use eqlab::approx::{Activation, Backend, Estimator, Head, MlpConfig, TrainItem};
use eqlab::eval::{exploitability, fixed_opponent_regret_probe, learning_curve_probe, ProbeConfig, Seat};
use eqlab::regret::{ArmConfig, ArmLearner, RegretVector};
use eqlab::tree::GameTree;
use eqlab::{build_game, Game, GameKind, InfoStateKey, TabularPolicy, UniformPolicy};
use eqlab_cli::commands::profile::load_profile;
use eqlab_cli::commands::train::{train, RunSummary};
use eqlab_cli::config::TrainConfig;
use eqlab_cli::csv::{read_rows, CURVE_HEADER};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rv(v: &[f64]) -> RegretVector {
    RegretVector::new(v.to_vec()).unwrap()
}

fn regret_engine() -> Check {
    ensure(rv(&[1.0, -2.0, 3.0]).potential() == 10.0, || "P(1,-2,3) != 10".into())?;
    ensure(rv(&[-1.0, -5.0]).potential() == 0.0, || "P(-1,-5) != 0".into())?;
    ensure(rv(&[0.0, 0.0, 0.0]).potential() == 0.0, || "P(0,0,0) != 0".into())?;
    ensure(rv(&[1.0, -2.0, 3.0]).potential_gradient() == [2.0, 0.0, 6.0], || "grad(1,-2,3)".into())?;
    ensure(rv(&[-1.0, -0.5]).potential_gradient() == [0.0, 0.0], || "grad of negative vector".into())?;
    ensure(rv(&[0.5]).potential_gradient() == [1.0], || "grad(0.5)".into())?;
    ensure(rv(&[2.0, 0.0, 6.0]).match_distribution().probs() == [0.25, 0.0, 0.75], || "match(2,0,6)".into())?;
    ensure(rv(&[-1.0, -3.0]).match_distribution().probs() == [0.5, 0.5], || "match(-1,-3)".into())?;
    ensure(rv(&[5.0]).match_distribution().probs() == [1.0], || "match(5)".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 10_000;
    let mut with_positive = 0;
    for i in 0..n {
        let m = rng.random_range(1..=8);
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(-10.0..10.0)).collect();
        let w = rv(&v);
        let p = w.match_distribution();
        let sum: f64 = p.probs().iter().sum();
        ensure(p.probs().iter().all(|&x| x >= 0.0) && (sum - 1.0).abs() < 1e-12, || format!("vector {i}: not a distribution"))?;
        let positive = v.iter().any(|&x| x > 0.0);
        ensure((w.potential() == 0.0) == !positive, || format!("vector {i}: P = 0 iff no positive entry"))?;
        ensure(w.potential_gradient().iter().all(|&g| g >= 0.0), || format!("vector {i}: negative gradient"))?;
        if positive {
            with_positive += 1;
            let dot: f64 = p.probs().iter().zip(&v).map(|(a, b)| a * b).sum();
            ensure(dot > 0.0, || format!("vector {i}: matched play has dot {dot} with its regrets"))?;
        }
        for c in [0.5, 2.0, 10.0] {
            let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
            let q = rv(&scaled).match_distribution();
            let gap = q.probs().iter().zip(p.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            ensure(gap < 1e-12, || format!("vector {i}: scaling by {c} moves matching by {gap}"))?;
        }
        let g = w.potential_gradient();
        let h = 1e-6;
        for k in (0..m).filter(|&k| v[k].abs() > 1e-3) {
            let (mut up, mut down) = (v.clone(), v.clone());
            up[k] += h;
            down[k] -= h;
            let fd = (rv(&up).potential() - rv(&down).potential()) / (2.0 * h);
            ensure((fd - g[k]).abs() < 1e-6, || format!("vector {i}, coordinate {k}: gradient {} vs {fd}", g[k]))?;
        }
    }
    Ok(format!("examples exact; {n} random vectors ({with_positive} with a positive entry)"))
}

fn kuhn_equilibrium(a: f64) -> TabularPolicy {
    let rows: [(&str, [f64; 2]); 12] = [
        ("0:0:", [1.0 - a, a]),
        ("0:1:", [1.0, 0.0]),
        ("0:2:", [1.0 - 3.0 * a, 3.0 * a]),
        ("0:0:pb", [1.0, 0.0]),
        ("0:1:pb", [2.0 / 3.0 - a, a + 1.0 / 3.0]),
        ("0:2:pb", [0.0, 1.0]),
        ("1:0:p", [2.0 / 3.0, 1.0 / 3.0]),
        ("1:1:p", [1.0, 0.0]),
        ("1:2:p", [0.0, 1.0]),
        ("1:0:b", [1.0, 0.0]),
        ("1:1:b", [2.0 / 3.0, 1.0 / 3.0]),
        ("1:2:b", [0.0, 1.0]),
    ];
    rows.iter().map(|(k, w)| (InfoStateKey::new(*k), w.to_vec())).collect()
}

/// Value to player 0 of a Kuhn deal and betting line (`true` = bet/call).
fn kuhn_payoff(cards: [usize; 2], betting: &[bool]) -> f64 {
    let show = |stake: f64| if cards[0] > cards[1] { stake } else { -stake };
    match betting {
        [false, false] => show(1.0),
        [true, false] => 1.0,
        [true, true] | [false, true, true] => show(2.0),
        [false, true, false] => -1.0,
        _ => unreachable!(),
    }
}

/// Value to player 0 when player `br` plays pure strategy `bits` (bit
/// `card * 2 + slot` means bet/call) and everyone else plays uniformly.
fn pure_vs_uniform(br: usize, bits: u32) -> f64 {
    let pure = |card: usize, slot: usize| ((bits >> (card * 2 + slot)) & 1) as f64;
    let lines: [&[bool]; 5] = [&[false, false], &[true, false], &[true, true], &[false, true, false], &[false, true, true]];
    let mut total = 0.0;
    for c0 in 0..3 {
        for c1 in (0..3).filter(|&c| c != c0) {
            for line in lines {
                let mut p = 1.0;
                for (i, &bet) in line.iter().enumerate() {
                    let (player, slot) = match i {
                        0 => (0, 0),
                        1 => (1, usize::from(line[0])),
                        _ => (0, 1),
                    };
                    let card = if player == 0 { c0 } else { c1 };
                    let q = if player == br { pure(card, slot) } else { 0.5 };
                    p *= if bet { q } else { 1.0 - q };
                }
                total += p * kuhn_payoff([c0, c1], line) / 6.0;
            }
        }
    }
    total
}

fn exact_evaluator() -> Check {
    let tree = GameTree::build(build_game(GameKind::Kuhn));
    let mut worst: f64 = 0.0;
    for a in [0.0, 1.0 / 6.0, 1.0 / 3.0] {
        let eq = kuhn_equilibrium(a);
        let report = exploitability(&tree, [&eq, &eq]);
        worst = worst.max(report.exploitability.abs());
        ensure(report.exploitability.abs() < 1e-9, || format!("a = {a}: exploitability {}", report.exploitability))?;
        let value = report.profile_values[0];
        ensure((value + 1.0 / 18.0).abs() < 1e-9, || format!("a = {a}: game value {value}"))?;
    }
    let best0 = (0..64).map(|b| pure_vs_uniform(0, b)).fold(f64::NEG_INFINITY, f64::max);
    let best1 = (0..64).map(|b| -pure_vs_uniform(1, b)).fold(f64::NEG_INFINITY, f64::max);
    let v0 = pure_vs_uniform(2, 0);
    let oracle = ((best0 - v0) + (best1 + v0)) / 2.0;
    let uniform = exploitability(&tree, [&UniformPolicy, &UniformPolicy]).exploitability;
    ensure((uniform - oracle).abs() < 1e-12, || format!("uniform exploitability {uniform} vs enumeration {oracle}"))?;
    Ok(format!("equilibrium family max |exploitability| {worst:.1e}; uniform {uniform:.12} = enumeration {oracle:.12}"))
}

fn kuhn_learner(algorithm: Algorithm, episodes: u64) -> AgentConfig {
    AgentConfig { algorithm, anneal_episodes: episodes, ..AgentConfig::default() }
}

fn regret_probe() -> Check {
    let t = 100_000;
    let game = build_game(GameKind::Kuhn);
    let learner = kuhn_learner(Algorithm::ArmNfsp, t);
    let mut lines = Vec::new();
    for seed in 1..=3 {
        for seat in 0..2 {
            let probe = ProbeConfig { episodes: t, seat, grid: vec![t / 10, t], seed };
            let points = fixed_opponent_regret_probe(game.clone(), &learner, &UniformPolicy, &probe).map_err(|e| e.to_string())?;
            let (early, last) = (points[0].regret, points[1].regret);
            lines.push(format!("seed {seed} seat {seat}: {last:.4} (T/10: {early:.4})"));
            ensure(last < 0.05 && last < 0.5 * early, || lines.join("; "))?;
        }
    }
    Ok(lines.join("; "))
}

fn run_config(game: GameKind, algorithm: Algorithm, episodes: u64, eval_every: u64, seed: u64, out: &Path) -> TrainConfig {
    let mut config = TrainConfig {
        game,
        episodes,
        eval_every,
        checkpoint_every: 0,
        seed,
        out: out.to_path_buf(),
        ..TrainConfig::default()
    };
    config.agent.algorithm = algorithm;
    config
}

fn train_run(config: &TrainConfig) -> Result<RunSummary, String> {
    train(config).map_err(|e| format!("{e:#}"))
}

fn kuhn_convergence() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let tree = GameTree::build(build_game(GameKind::Kuhn));
    let uniform = exploitability(&tree, [&UniformPolicy, &UniformPolicy]).exploitability;
    let mut finals = Vec::new();
    for seed in 1..=3 {
        let run = train_run(&run_config(GameKind::Kuhn, Algorithm::ArmNfsp, 500_000, 50_000, seed, tmp.path()))?;
        finals.push(run.final_exploitability);
    }
    let text = format!(
        "final exploitability {} (uniform {uniform:.4}, bound {:.4})",
        finals.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", "),
        0.05f64.min(0.2 * uniform)
    );
    ensure(finals.iter().all(|&x| x < 0.05 && x < 0.2 * uniform), || text.clone())?;
    Ok(text)
}

/// Rows strictly above `episodes / eval_every - 1`, stamps increasing.
fn check_cadence(run: &RunSummary, episodes: u64, eval_every: u64) -> Result<(), String> {
    let rows = read_rows(&run.dir.join("curve.csv"), CURVE_HEADER).map_err(|e| e.to_string())?;
    let stamps: Vec<u64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    ensure(stamps.len() as u64 > episodes / eval_every - 1, || format!("{} curve rows", stamps.len()))?;
    ensure(stamps.windows(2).all(|w| w[0] < w[1]), || "episode stamps not increasing".into())?;
    ensure(stamps.last() == Some(&episodes), || "last row is not the final episode".into())
}

fn comparative() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let episodes = 300_000;
    let eval_every = 10_000;
    let mut lines = Vec::new();
    let mut pass = true;
    for game in [GameKind::Leduc, GameKind::LiarsDice] {
        let mut means = [0.0; 2];
        for (i, algorithm) in [Algorithm::ArmNfsp, Algorithm::Nfsp].into_iter().enumerate() {
            let mut values = Vec::new();
            for seed in 1..=5 {
                let out = tmp.path().join(format!("{game}-{}", algorithm.name()));
                let run = train_run(&run_config(game, algorithm, episodes, eval_every, seed, &out))?;
                check_cadence(&run, episodes, eval_every).map_err(|e| format!("{game} {} seed {seed}: {e}", algorithm.name()))?;
                values.push(run.final_exploitability);
            }
            means[i] = values.iter().sum::<f64>() / values.len() as f64;
            lines.push(format!(
                "{game} {} [{}] mean {:.4}",
                algorithm.name(),
                values.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" "),
                means[i]
            ));
        }
        pass &= means[0] <= means[1];
    }
    ensure(pass, || lines.join("; "))?;
    Ok(lines.join("; "))
}

fn tic_tac_toe() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let game = build_game(GameKind::TicTacToe);
    let mut lines = Vec::new();
    let mut pass = true;
    for seed in 1..=3 {
        let run = train_run(&run_config(GameKind::TicTacToe, Algorithm::ArmNfsp, 300_000, 300_000, seed, tmp.path()))?;
        let profile = load_profile(&run.dir, Some(GameKind::TicTacToe)).map_err(|e| format!("{e:#}"))?;
        let first = learning_curve_probe(&*game, profile.seat(0), 100_000, Seat::First, 100 + seed).map_err(|e| e.to_string())?;
        let second = learning_curve_probe(&*game, profile.seat(1), 100_000, Seat::Second, 200 + seed).map_err(|e| e.to_string())?;
        pass &= first >= 0.7 && second >= 0.3;
        lines.push(format!("seed {seed}: first {first:.3}, second {second:.3}"));
    }
    ensure(pass, || lines.join("; "))?;
    Ok(lines.join("; "))
}

/// Agent-shaped networks for `game` and examples built from its keys.
fn gradient_checks(game: &dyn Game, tree: &GameTree) -> Result<f64, String> {
    let f = game.feature_len();
    let n = game.num_distinct_actions();
    let shipped = MlpConfig::default();
    let nets = [
        ("q", Estimator::mlp(f, n, shipped, 1)),
        ("v", Estimator::mlp(f, 1, shipped, 2)),
        ("average", Estimator::mlp(f, n, MlpConfig { head: Head::Classification, ..shipped }, 3)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let infosets = tree.infosets();
    for _ in 0..4 {
        let info = &infosets[rng.random_range(0..infosets.len())];
        let features = game.encode_features(&info.key).map_err(|e| e.to_string())?;
        let mask: Vec<bool> = (0..n).map(|a| info.legal.contains(&(a as u32))).collect();
        for (name, net) in &nets {
            let out = net.output_dim();
            let target: Vec<f64> = if *name == "average" {
                let mut t = vec![0.0; out];
                t[info.legal[rng.random_range(0..info.legal.len())] as usize] = 1.0;
                t
            } else {
                (0..out).map(|_| rng.random_range(-1.0..1.0)).collect()
            };
            let mask = (*name != "v").then(|| mask.clone());
            let item = TrainItem { key: info.key.clone(), features: features.clone(), target, mask };
            let err = net.gradient_check(&item).map_err(|e| e.to_string())?;
            ensure(err < 1e-4, || format!("{} {name} at {}: {err:.2e}", game.name(), info.key.as_str()))?;
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

fn arm_bandit(backend: Backend) -> Result<f64, String> {
    let mut arm = ArmLearner::new(build_game(GameKind::Kuhn), ArmConfig { backend, ..ArmConfig::default() }, 3);
    let key = InfoStateKey::new("1:1:b");
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let mut batch = Vec::with_capacity(128);
        while batch.len() < 128 {
            // opponent bets K always and J two times in three
            let jack = rng.random_bool(0.5);
            if jack && !rng.random_bool(2.0 / 3.0) {
                continue;
            }
            let action = arm.arm_policy(&key, &[0, 1]).sample_index(&mut rng) as u32;
            let ret = match (action, jack) {
                (0, _) => -1.0,
                (_, true) => 2.0,
                (_, false) => -2.0,
            };
            batch.push(transition("1:1:b", action, ret, None, Mode::BestResponse));
        }
        arm.arm_update(&batch).map_err(|e| e.to_string())?;
    }
    Ok(arm.arm_policy(&key, &[0, 1]).probs()[1])
}

fn transition(key: &str, action: u32, ret: f64, next: Option<NextState>, mode: Mode) -> Transition {
    Transition {
        key: InfoStateKey::new(key),
        legal: vec![0, 1],
        action,
        reward: if next.is_none() { ret } else { 0.0 },
        next,
        episode: 0,
        ret,
        mode,
    }
}

fn q_chain(backend: Backend) -> Result<[f64; 3], String> {
    let mut q = QLearner::new(build_game(GameKind::Kuhn), backend, 0.1, 10, MlpConfig::default(), 5);
    let next = || Some(NextState { key: InfoStateKey::new("0:2:pb"), legal: vec![0, 1] });
    let batch = [
        transition("0:2:", 0, 0.0, next(), Mode::BestResponse),
        transition("0:2:pb", 0, -1.0, None, Mode::BestResponse),
        transition("0:2:pb", 1, 2.0, None, Mode::BestResponse),
    ];
    let refs: Vec<&Transition> = batch.iter().collect();
    for _ in 0..3000 {
        q.rl_update(&refs).map_err(|e| e.to_string())?;
    }
    let first = q.q_values(&InfoStateKey::new("0:2:"), &[0, 1]).map_err(|e| e.to_string())?;
    let second = q.q_values(&InfoStateKey::new("0:2:pb"), &[0, 1]).map_err(|e| e.to_string())?;
    Ok([first[0], second[0], second[1]])
}

fn selfplay_vs_uniform(algorithm: Algorithm, backend: Backend, tree: &GameTree) -> Result<f64, String> {
    let game = tree.game().clone();
    let episodes = 100_000;
    let config = AgentConfig { backend, ..kuhn_learner(algorithm, episodes) };
    let mut agents = [
        Agent::new(game.clone(), 0, config.clone(), 1).map_err(|e| e.to_string())?,
        Agent::new(game.clone(), 1, config, 1).map_err(|e| e.to_string())?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut last = f64::NAN;
    run_selfplay(&*game, &mut agents, SelfPlayConfig { episodes, eval_every: episodes }, &mut rng, |_, a| {
        last = exploitability(tree, [&a[0], &a[1]]).exploitability;
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(last)
}

fn approximators() -> Check {
    let mut worst: f64 = 0.0;
    for kind in GameKind::ALL {
        let game = build_game(kind);
        let tree = GameTree::build(game.clone());
        worst = worst.max(gradient_checks(&*game, &tree)?);
    }
    let linear = MlpConfig { activation: Activation::Identity, init_scale: 0.5, ..MlpConfig::default() };
    let item = TrainItem {
        key: InfoStateKey::new("x"),
        features: vec![0.3, -1.2, 0.7, 2.0],
        target: vec![1.0, -0.5, 0.25],
        mask: None,
    };
    let linear_err = Estimator::mlp(4, 3, linear, 2).gradient_check(&item).map_err(|e| e.to_string())?;
    ensure(linear_err < 1e-7, || format!("linear configuration: {linear_err:.2e}"))?;

    let kuhn = GameTree::build(build_game(GameKind::Kuhn));
    let uniform = exploitability(&kuhn, [&UniformPolicy, &UniformPolicy]).exploitability;
    let mut suite = Vec::new();
    for backend in [Backend::Tabular, Backend::Mlp] {
        let p_call = arm_bandit(backend)?;
        ensure(p_call > 0.9, || format!("{}: regret matching P(call) {p_call}", backend.name()))?;
        let [first, fold, call] = q_chain(backend)?;
        ensure((fold + 1.0).abs() < 0.05 && (call - 2.0).abs() < 0.05 && (first - 2.0).abs() < 0.1, || {
            format!("{}: Q chain {first} {fold} {call}", backend.name())
        })?;
        for algorithm in [Algorithm::Nfsp, Algorithm::ArmNfsp] {
            let e = selfplay_vs_uniform(algorithm, backend, &kuhn)?;
            ensure(e < 0.7 * uniform, || format!("{} {}: exploitability {e} vs uniform {uniform}", backend.name(), algorithm.name()))?;
            suite.push(format!("{}/{} {e:.3}", backend.name(), algorithm.name()));
        }
    }
    Ok(format!(
        "max gradient error {worst:.2e} (linear {linear_err:.1e}); learner suite passes on both backends, Kuhn 100K: {}",
        suite.join(", ")
    ))
}

/// Relative path and bytes of every file under `dir`.
fn tree_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let mut config = run_config(GameKind::Kuhn, Algorithm::ArmNfsp, 10_000, 1000, 7, &tmp.path().join(name));
        config.checkpoint_every = 5000;
        let run = train_run(&config)?;
        let mut files = tree_bytes(&run.dir.join("checkpoints"));
        files.push(("curve.csv".into(), std::fs::read(run.dir.join("curve.csv")).map_err(|e| e.to_string())?));
        outputs.push(files);
    }
    ensure(outputs[0] == outputs[1], || "runs differ".into())?;
    Ok(format!("{} files byte-identical across two runs", outputs[0].len()))
}

fn three_sigma(hits: u64, trials: u64, p: f64) -> bool {
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    (hits as f64 - trials as f64 * p).abs() <= 3.0 * sd
}

fn buffers() -> Check {
    let (streams, len, capacity) = (1000u64, 10_000u32, 100usize);
    let rows: Vec<Vec<u32>> = (0..streams)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut buf = SlBuffer::new(capacity);
            for i in 0..len {
                buf.insert(SlItem { key: InfoStateKey::new("0:0:"), action: i, legal_mask: 0 }, &mut rng);
            }
            buf.items().iter().map(|it| it.action).collect()
        })
        .collect();
    let p = capacity as f64 / len as f64;
    for position in [0, 1, 99, 100, 101, 5000, 9998, 9999] {
        let hits = rows.iter().filter(|r| r.contains(&position)).count() as u64;
        ensure(three_sigma(hits, streams, p), || format!("item {position} kept {hits} of {streams} times"))?;
    }
    for block in 0..10 {
        let range = block * 1000..(block + 1) * 1000;
        let hits: u64 = rows.iter().map(|r| r.iter().filter(|&&i| range.contains(&i)).count() as u64).sum();
        ensure(three_sigma(hits, streams * 1000, p), || format!("block {block}: {hits}"))?;
    }
    let mut ring = RlBuffer::new(5);
    for i in 0..23u64 {
        let mut t = transition("0:0:", 0, 0.0, None, Mode::Average);
        t.episode = i;
        let evicted = ring.push(t).map(|t| t.episode);
        ensure(evicted == i.checked_sub(5), || format!("push {i} evicted {evicted:?}"))?;
        let held: Vec<u64> = ring.iter().map(|t| t.episode).collect();
        ensure(held == (i.saturating_sub(4)..=i).collect::<Vec<_>>(), || format!("after push {i}: {held:?}"))?;
    }
    Ok(format!("{streams} streams within 3 sigma; eviction order exact"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, name: "regret engine", limit: Duration::from_secs(1), run: regret_engine },
    Criterion { id: 2, name: "exact evaluator oracles", limit: Duration::from_secs(10), run: exact_evaluator },
    Criterion { id: 3, name: "regret probe vs uniform", limit: Duration::from_secs(5 * 60), run: regret_probe },
    Criterion { id: 4, name: "kuhn self-play convergence", limit: Duration::from_secs(15 * 60), run: kuhn_convergence },
    Criterion { id: 5, name: "arm-nfsp vs nfsp on leduc and liars dice", limit: Duration::from_secs(2 * 3600), run: comparative },
    Criterion { id: 6, name: "tic-tac-toe vs random", limit: Duration::from_secs(30 * 60), run: tic_tac_toe },
    Criterion { id: 7, name: "approximator checks", limit: Duration::from_secs(60), run: approximators },
    Criterion { id: 8, name: "training determinism", limit: Duration::from_secs(60), run: determinism },
    Criterion { id: 9, name: "buffer statistics", limit: Duration::from_secs(10), run: buffers },
];

fn main() {
    let selected: Option<Vec<u32>> = std::env::var("EQLAB_ACCEPTANCE")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| selected.as_ref().is_none_or(|s| s.contains(&c.id))) {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(d) => (false, d),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {}: {} {} ({:.1}s): {detail}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
