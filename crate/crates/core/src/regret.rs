//! Regret matching with the quadratic potential `P(w) = sum (w+)^2`, and the
//! advantage-based learner that accumulates clipped `Q - V` per information
//! state and plays the matched distribution.

use crate::agents::{Mode, Transition};
use crate::approx::{fmt_float, parse_floats, Backend, Estimator, Input, MlpConfig, TrainItem};
use crate::error::{Error, Result};
use crate::game::{ActionId, GameRef, InfoStateKey};
use crate::policy::{Distribution, Policy};
use std::collections::BTreeMap;

/// Regret vector over the legal actions of one information state.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretVector(Vec<f64>);

impl RegretVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoLegalActions);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("regret vector"));
        }
        Ok(RegretVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn potential(&self) -> f64 {
        self.0.iter().map(|w| w.max(0.0).powi(2)).sum()
    }

    pub fn potential_gradient(&self) -> Vec<f64> {
        self.0.iter().map(|w| 2.0 * w.max(0.0)).collect()
    }

    /// Normalized positive part; uniform when no entry is positive.
    pub fn match_distribution(&self) -> Distribution {
        let plus: Vec<f64> = self.0.iter().map(|w| w.max(0.0)).collect();
        Distribution::from_weights(&plus)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmConfig {
    pub backend: Backend,
    pub q_lr: f64,
    pub v_lr: f64,
    /// Minimum number of transitions per update.
    pub batch: usize,
    pub mlp: MlpConfig,
}

impl Default for ArmConfig {
    fn default() -> Self {
        ArmConfig { backend: Backend::Tabular, q_lr: 0.1, v_lr: 0.1, batch: 128, mlp: MlpConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmStats {
    pub q_loss: f64,
    pub v_loss: f64,
    /// Mean cumulative regret over the updated keys' entries.
    pub mean_abs_regret: f64,
    pub keys_updated: usize,
}

#[derive(Debug, Clone)]
pub struct ArmLearner {
    game: GameRef,
    config: ArmConfig,
    q: Estimator,
    v: Estimator,
    regrets: BTreeMap<InfoStateKey, Vec<f64>>,
    t: u64,
}

impl ArmLearner {
    pub fn new(game: GameRef, config: ArmConfig, seed: u64) -> Self {
        let n = game.num_distinct_actions();
        let (q, v) = match config.backend {
            Backend::Tabular => (Estimator::tabular(n), Estimator::tabular(1)),
            Backend::Mlp => {
                let f = game.feature_len();
                (Estimator::mlp(f, n, config.mlp, seed), Estimator::mlp(f, 1, config.mlp, seed ^ 0x5eed))
            }
        };
        ArmLearner { game, config, q, v, regrets: BTreeMap::new(), t: 0 }
    }

    pub fn config(&self) -> &ArmConfig {
        &self.config
    }

    /// Completed update iterations.
    pub fn iterations(&self) -> u64 {
        self.t
    }

    pub fn q(&self) -> &Estimator {
        &self.q
    }

    pub fn v(&self) -> &Estimator {
        &self.v
    }

    pub fn regrets(&self) -> &BTreeMap<InfoStateKey, Vec<f64>> {
        &self.regrets
    }

    pub fn set_regret(&mut self, key: InfoStateKey, values: Vec<f64>) -> Result<()> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(format!("cumulative regrets must be >= 0 at {key}")));
        }
        self.regrets.insert(key, values);
        Ok(())
    }

    pub fn arm_policy(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        match self.regrets.get(key) {
            Some(r) if r.len() == legal.len() => Distribution::from_weights(r),
            _ => Distribution::uniform(legal.len()),
        }
    }

    fn features(&self, key: &InfoStateKey) -> Result<Vec<f64>> {
        match self.config.backend {
            Backend::Tabular => Ok(Vec::new()),
            Backend::Mlp => self.game.encode_features(key),
        }
    }

    /// Fit Q to the Monte-Carlo return of every transition and V to the
    /// returns of best-response transitions, then add the advantage
    /// `Q(k, .) - V(k)` to the cumulative regret of every key in `batch`,
    /// clipping the sum at zero.
    pub fn arm_update(&mut self, batch: &[Transition]) -> Result<ArmStats> {
        if batch.len() < self.config.batch.max(1) {
            return Err(Error::NotReady(format!(
                "arm update needs {} transitions, have {}",
                self.config.batch,
                batch.len()
            )));
        }
        let n = self.game.num_distinct_actions();
        let mut v_items = Vec::with_capacity(batch.len());
        let mut q_items = Vec::with_capacity(batch.len());
        let mut visited: BTreeMap<&InfoStateKey, &[ActionId]> = BTreeMap::new();
        for t in batch {
            let features = self.features(&t.key)?;
            let mut target = vec![0.0; n];
            let mut mask = vec![false; n];
            target[t.action as usize] = t.ret;
            mask[t.action as usize] = true;
            if t.mode == Mode::BestResponse {
                v_items.push(TrainItem { key: t.key.clone(), features: features.clone(), target: vec![t.ret], mask: None });
            }
            q_items.push(TrainItem { key: t.key.clone(), features, target, mask: Some(mask) });
            visited.insert(&t.key, &t.legal);
        }
        // V is the value of following the regret-matching policy, so it only
        // learns from returns observed while doing so
        let v_loss = if v_items.is_empty() { 0.0 } else { self.v.fit_batch(&v_items, self.config.v_lr)? };
        let q_loss = self.q.fit_batch(&q_items, self.config.q_lr)?;

        let mut total = 0.0;
        let mut entries = 0usize;
        for (key, legal) in &visited {
            let features = self.features(key)?;
            let input = Input { key, features: &features };
            let q = self.q.predict(input)?;
            let v = self.v.predict(input)?[0];
            let row = self.regrets.entry((*key).clone()).or_insert_with(|| vec![0.0; legal.len()]);
            for (r, &a) in row.iter_mut().zip(legal.iter()) {
                *r = (*r + q[a as usize] - v).max(0.0);
                total += *r;
            }
            entries += legal.len();
        }
        self.t += 1;
        Ok(ArmStats {
            q_loss,
            v_loss,
            mean_abs_regret: if entries > 0 { total / entries as f64 } else { 0.0 },
            keys_updated: visited.len(),
        })
    }

    /// `key<TAB>r1,r2,...` lines in key order.
    pub fn regrets_to_text(&self) -> String {
        let mut out = String::new();
        for (key, row) in &self.regrets {
            let values: Vec<String> = row.iter().map(|&r| fmt_float(r)).collect();
            out.push_str(&format!("{key}\t{}\n", values.join(",")));
        }
        out
    }

    pub fn load_regrets(&mut self, text: &str) -> Result<()> {
        let mut table = BTreeMap::new();
        for line in text.lines().filter(|l| !l.is_empty()) {
            let (key, values) =
                line.split_once('\t').ok_or_else(|| Error::Checkpoint(format!("bad regret row `{line}`")))?;
            let values = parse_floats(values, ',')?;
            if values.iter().any(|v| *v < 0.0) {
                return Err(Error::Checkpoint(format!("negative cumulative regret at `{key}`")));
            }
            table.insert(InfoStateKey::new(key), values);
        }
        self.regrets = table;
        Ok(())
    }

    pub fn load_estimators(&mut self, q: Estimator, v: Estimator, iterations: u64) -> Result<()> {
        let n = self.game.num_distinct_actions();
        if q.output_dim() != n || v.output_dim() != 1 || q.backend() != self.config.backend {
            return Err(Error::Checkpoint("arm estimators do not match the game or backend".into()));
        }
        self.q = q;
        self.v = v;
        self.t = iterations;
        Ok(())
    }
}

impl Policy for ArmLearner {
    fn action_probabilities(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        self.arm_policy(key, legal)
    }
}
