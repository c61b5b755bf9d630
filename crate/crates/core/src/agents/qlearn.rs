use super::buffers::Transition;
use crate::approx::{Backend, Estimator, Input, MlpConfig, TrainItem};
use crate::error::{Error, Result};
use crate::game::{ActionId, GameRef, InfoStateKey};
use crate::policy::Distribution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlStats {
    pub loss: f64,
    pub target_synced: bool,
}

/// Q-learning best response with a periodically synchronized target
/// estimator.
#[derive(Debug, Clone)]
pub struct QLearner {
    game: GameRef,
    backend: Backend,
    q: Estimator,
    target: Estimator,
    lr: f64,
    sync_every: u64,
    updates: u64,
}

impl QLearner {
    pub fn new(game: GameRef, backend: Backend, lr: f64, sync_every: u64, mlp: MlpConfig, seed: u64) -> Self {
        let n = game.num_distinct_actions();
        let q = match backend {
            Backend::Tabular => Estimator::tabular(n),
            Backend::Mlp => Estimator::mlp(game.feature_len(), n, mlp, seed),
        };
        QLearner { game, backend, target: q.clone(), q, lr, sync_every: sync_every.max(1), updates: 0 }
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn estimator(&self) -> &Estimator {
        &self.q
    }

    pub fn target(&self) -> &Estimator {
        &self.target
    }

    pub fn load(&mut self, q: Estimator, target: Estimator, updates: u64) -> Result<()> {
        if q.backend() != self.backend || q.output_dim() != self.game.num_distinct_actions() {
            return Err(Error::Checkpoint("q estimator does not match the game or backend".into()));
        }
        self.q = q;
        self.target = target;
        self.updates = updates;
        Ok(())
    }

    fn features(&self, key: &InfoStateKey) -> Result<Vec<f64>> {
        match self.backend {
            Backend::Tabular => Ok(Vec::new()),
            Backend::Mlp => self.game.encode_features(key),
        }
    }

    fn values(est: &Estimator, key: &InfoStateKey, features: &[f64], legal: &[ActionId]) -> Result<Vec<f64>> {
        let all = est.predict(Input { key, features })?;
        Ok(legal.iter().map(|&a| all[a as usize]).collect())
    }

    /// Online Q values restricted to `legal`.
    pub fn q_values(&self, key: &InfoStateKey, legal: &[ActionId]) -> Result<Vec<f64>> {
        Self::values(&self.q, key, &self.features(key)?, legal)
    }

    /// ε-greedy distribution; the greedy action is the first maximizer.
    pub fn epsilon_greedy(&self, key: &InfoStateKey, legal: &[ActionId], epsilon: f64) -> Result<Distribution> {
        if legal.is_empty() {
            return Err(Error::NoLegalActions);
        }
        let q = self.q_values(key, legal)?;
        let best = argmax(&q);
        let n = legal.len() as f64;
        let mut probs = vec![epsilon / n; legal.len()];
        probs[best] += 1.0 - epsilon;
        Ok(Distribution::from_weights(&probs))
    }

    /// One step toward `r + max_a' Q_target(s', a')`, or `r` at terminals.
    pub fn rl_update(&mut self, batch: &[&Transition]) -> Result<RlStats> {
        if batch.is_empty() {
            return Err(Error::NotReady("empty rl batch".into()));
        }
        let n = self.game.num_distinct_actions();
        let items = batch
            .iter()
            .map(|t| {
                let bootstrap = match &t.next {
                    None => 0.0,
                    Some(next) => {
                        let q = Self::values(&self.target, &next.key, &self.features(&next.key)?, &next.legal)?;
                        q.into_iter().fold(f64::NEG_INFINITY, f64::max)
                    }
                };
                let mut target = vec![0.0; n];
                let mut mask = vec![false; n];
                target[t.action as usize] = t.reward + bootstrap;
                mask[t.action as usize] = true;
                Ok(TrainItem { key: t.key.clone(), features: self.features(&t.key)?, target, mask: Some(mask) })
            })
            .collect::<Result<Vec<_>>>()?;
        let loss = self.q.fit_batch(&items, self.lr)?;
        self.updates += 1;
        let target_synced = self.updates.is_multiple_of(self.sync_every);
        if target_synced {
            self.target = self.q.clone();
        }
        Ok(RlStats { loss, target_synced })
    }
}

/// Index of the first maximal entry.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
