use super::buffers::{Insert, SlBuffer, SlItem};
use crate::approx::{fmt_float, masked_softmax, parse_floats, Estimator, Head, Input, MlpConfig, TrainItem};
use crate::error::{Error, Result};
use crate::game::{ActionId, GameRef, InfoStateKey};
use crate::policy::{Distribution, Policy, TabularPolicy};
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
enum AvgHead {
    /// Action counts padded to the game's action count. Reservoir changes
    /// are queued and folded in by `sl_update`.
    Counts { counts: BTreeMap<InfoStateKey, Vec<f64>>, pending: Vec<(SlItem, f64)> },
    Classifier(Estimator),
}

/// The average policy: action frequencies of the supervised memory, either
/// counted exactly or fitted by a classifier.
#[derive(Debug, Clone)]
pub struct AveragePolicy {
    game: GameRef,
    head: AvgHead,
}

impl AveragePolicy {
    pub fn counts(game: GameRef) -> Self {
        AveragePolicy { game, head: AvgHead::Counts { counts: BTreeMap::new(), pending: Vec::new() } }
    }

    pub fn classifier(game: GameRef, config: MlpConfig, seed: u64) -> Self {
        let config = MlpConfig { head: Head::Classification, ..config };
        let est = Estimator::mlp(game.feature_len(), game.num_distinct_actions(), config, seed);
        AveragePolicy { game, head: AvgHead::Classifier(est) }
    }

    pub fn game(&self) -> &GameRef {
        &self.game
    }

    pub fn is_tabular(&self) -> bool {
        matches!(self.head, AvgHead::Counts { .. })
    }

    /// Tell the policy what a reservoir insertion did.
    pub(crate) fn observe(&mut self, item: &SlItem, outcome: &Insert) {
        if let AvgHead::Counts { pending, .. } = &mut self.head {
            match outcome {
                Insert::Appended => pending.push((item.clone(), 1.0)),
                Insert::Replaced(old) => {
                    pending.push((old.clone(), -1.0));
                    pending.push((item.clone(), 1.0));
                }
                Insert::Discarded => {}
            }
        }
    }

    /// Bring the policy up to date with `memory`.
    ///
    /// Counts: fold in every queued change, after which the table equals
    /// the memory's empirical frequencies; the returned loss is the mean
    /// negative log-likelihood of the newly added samples beforehand.
    /// Classifier: one cross-entropy step on `batch` sampled items.
    pub fn sl_update<R: Rng + ?Sized>(
        &mut self,
        memory: &SlBuffer,
        batch: usize,
        lr: f64,
        rng: &mut R,
    ) -> Result<f64> {
        if memory.is_empty() || memory.len() < batch {
            return Err(Error::NotReady(format!("supervised memory holds {} of {batch}", memory.len())));
        }
        let n = self.game.num_distinct_actions();
        match &mut self.head {
            AvgHead::Counts { counts, pending } => {
                let (mut nll, mut added) = (0.0, 0usize);
                for (item, delta) in pending.iter().filter(|(_, d)| *d > 0.0) {
                    let row = counts.get(&item.key);
                    let p = match row {
                        Some(r) => {
                            let legal_total: f64 = mask_iter(item.legal_mask).map(|a| r[a as usize]).sum();
                            if legal_total > 0.0 {
                                r[item.action as usize] / legal_total
                            } else {
                                1.0 / item.legal_mask.count_ones() as f64
                            }
                        }
                        None => 1.0 / item.legal_mask.count_ones() as f64,
                    };
                    nll -= delta * p.max(1e-12).ln();
                    added += 1;
                }
                let mut emptied = false;
                for (item, delta) in pending.drain(..) {
                    let row = counts.entry(item.key).or_insert_with(|| vec![0.0; n]);
                    row[item.action as usize] += delta;
                    emptied |= row.iter().all(|c| *c == 0.0);
                }
                if emptied {
                    // every sample of some key was evicted
                    counts.retain(|_, r| r.iter().any(|c| *c != 0.0));
                }
                Ok(if added > 0 { nll / added as f64 } else { 0.0 })
            }
            AvgHead::Classifier(est) => {
                let items: Vec<TrainItem> = memory
                    .sample(batch, rng)
                    .into_iter()
                    .map(|it| {
                        let mut target = vec![0.0; n];
                        target[it.action as usize] = 1.0;
                        let mask = (0..n).map(|a| it.legal_mask & (1 << a) != 0).collect();
                        Ok(TrainItem {
                            key: it.key.clone(),
                            features: self.game.encode_features(&it.key)?,
                            target,
                            mask: Some(mask),
                        })
                    })
                    .collect::<Result<_>>()?;
                est.fit_batch(&items, lr)
            }
        }
    }

    /// Fold queued reservoir changes into the counts without training
    /// anything else. No effect on a classifier.
    pub fn flush(&mut self) {
        if let AvgHead::Counts { counts, pending } = &mut self.head {
            let n = self.game.num_distinct_actions();
            for (item, delta) in pending.drain(..) {
                counts.entry(item.key).or_insert_with(|| vec![0.0; n])[item.action as usize] += delta;
            }
            counts.retain(|_, r| r.iter().any(|c| *c != 0.0));
        }
    }

    /// Current distribution over `legal` at `key`.
    pub fn distribution(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        match &self.head {
            AvgHead::Counts { counts, .. } => match counts.get(key) {
                Some(row) => {
                    let w: Vec<f64> = legal.iter().map(|&a| row[a as usize]).collect();
                    Distribution::from_weights(&w)
                }
                None => Distribution::uniform(legal.len()),
            },
            AvgHead::Classifier(est) => {
                let Ok(features) = self.game.encode_features(key) else {
                    return Distribution::uniform(legal.len());
                };
                let Ok(logits) = est.predict(Input { key, features: &features }) else {
                    return Distribution::uniform(legal.len());
                };
                let picked: Vec<f64> = legal.iter().map(|&a| logits[a as usize]).collect();
                Distribution::from_weights(&masked_softmax(&picked, None))
            }
        }
    }

    /// Freeze into a table over `keys` (with their legal actions).
    pub fn snapshot<'a>(&self, keys: impl IntoIterator<Item = (&'a InfoStateKey, &'a [ActionId])>) -> TabularPolicy {
        keys.into_iter().map(|(k, legal)| (k.clone(), self.distribution(k, legal).into_vec())).collect()
    }

    /// Counts: `key<TAB>c0 c1 ...` lines padded to the action count.
    /// Classifier: an estimator checkpoint.
    pub fn to_text(&self) -> String {
        match &self.head {
            AvgHead::Counts { counts, .. } => {
                let mut out = String::from("average-counts-v1\n");
                for (key, row) in counts {
                    let values: Vec<String> = row.iter().map(|&c| fmt_float(c)).collect();
                    out.push_str(&format!("{key}\t{}\n", values.join(" ")));
                }
                out
            }
            AvgHead::Classifier(est) => est.to_checkpoint(),
        }
    }

    pub fn from_text(game: GameRef, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("average-counts-v1") => {
                let n = game.num_distinct_actions();
                let mut counts = BTreeMap::new();
                for line in lines.filter(|l| !l.is_empty()) {
                    let (key, values) = line
                        .split_once('\t')
                        .ok_or_else(|| Error::Checkpoint(format!("bad average row `{line}`")))?;
                    let row = parse_floats(values, ' ')?;
                    if row.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: row.len() });
                    }
                    if row.iter().any(|c| *c < 0.0) {
                        return Err(Error::Checkpoint(format!("negative weight at `{key}`")));
                    }
                    let key = InfoStateKey::new(key);
                    game.encode_features(&key)?;
                    counts.insert(key, row);
                }
                Ok(AveragePolicy { game, head: AvgHead::Counts { counts, pending: Vec::new() } })
            }
            _ => {
                let est = Estimator::from_checkpoint(text)?;
                if est.output_dim() != game.num_distinct_actions() {
                    return Err(Error::Checkpoint(format!(
                        "classifier has {} outputs, {} has {} actions",
                        est.output_dim(),
                        game.name(),
                        game.num_distinct_actions()
                    )));
                }
                if let Estimator::Mlp(m) = &est {
                    if m.input_dim() != game.feature_len() {
                        return Err(Error::DimensionMismatch { expected: game.feature_len(), got: m.input_dim() });
                    }
                }
                Ok(AveragePolicy { game, head: AvgHead::Classifier(est) })
            }
        }
    }

    /// Table of raw weights, for the tabular head.
    pub fn count_table(&self) -> Option<&BTreeMap<InfoStateKey, Vec<f64>>> {
        match &self.head {
            AvgHead::Counts { counts, .. } => Some(counts),
            AvgHead::Classifier(_) => None,
        }
    }

    /// Counts table built from explicit distributions over legal actions,
    /// e.g. to checkpoint a hand-written policy.
    pub fn from_policy(game: GameRef, policy: &TabularPolicy) -> Result<Self> {
        let n = game.num_distinct_actions();
        let mut counts = BTreeMap::new();
        let mut legal_of = BTreeMap::new();
        for tree_key in crate::tree::GameTree::build(game.clone()).infosets() {
            legal_of.insert(tree_key.key.clone(), tree_key.legal.clone());
        }
        for (key, weights) in policy.iter() {
            let legal = legal_of.get(key).ok_or_else(|| Error::ForeignKey { key: key.to_string(), game: game.name() })?;
            if legal.len() != weights.len() {
                return Err(Error::DimensionMismatch { expected: legal.len(), got: weights.len() });
            }
            let mut row = vec![0.0; n];
            for (&a, &w) in legal.iter().zip(weights) {
                row[a as usize] = w;
            }
            counts.insert(key.clone(), row);
        }
        Ok(AveragePolicy { game, head: AvgHead::Counts { counts, pending: Vec::new() } })
    }
}

fn mask_iter(mask: u32) -> impl Iterator<Item = ActionId> {
    (0..32).filter(move |a| mask & (1 << a) != 0)
}

impl Policy for AveragePolicy {
    fn action_probabilities(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        self.distribution(key, legal)
    }
}
