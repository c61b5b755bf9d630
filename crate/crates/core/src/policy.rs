//! Distributions over legal actions and behavioural policies.

use crate::error::{Error, Result};
use crate::game::{ActionId, InfoStateKey};
use rand::Rng;
use std::collections::BTreeMap;

/// Probability vector aligned with an ascending legal-action list.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Wrap raw probabilities. Entries must be non-negative and sum to one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NoLegalActions);
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("not a distribution: {probs:?}")));
        }
        Ok(Distribution(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Distribution(vec![1.0 / n as f64; n])
    }

    /// Normalize non-negative weights; all-zero weights give the uniform
    /// distribution.
    pub fn from_weights(weights: &[f64]) -> Self {
        let sum: f64 = weights.iter().sum();
        if sum > 0.0 {
            Distribution(weights.iter().map(|w| w / sum).collect())
        } else {
            Distribution::uniform(weights.len())
        }
    }

    /// `(1 - epsilon) * self + epsilon * uniform`.
    pub fn mix_uniform(&self, epsilon: f64) -> Self {
        let u = epsilon / self.0.len() as f64;
        Distribution(self.0.iter().map(|p| (1.0 - epsilon) * p + u).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sample an index by inverse CDF. One uniform draw per call.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in self.0.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        // rounding left u above the final cumulative sum
        self.0.iter().rposition(|p| *p > 0.0).unwrap_or(self.0.len() - 1)
    }
}

/// A behavioural strategy: a distribution over legal actions for any key.
pub trait Policy: Sync {
    fn action_probabilities(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution;
}

/// Uniform over legal actions everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformPolicy;

impl Policy for UniformPolicy {
    fn action_probabilities(&self, _key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        Distribution::uniform(legal.len())
    }
}

/// Table of non-negative weights per key, aligned with the key's legal
/// actions. Missing keys and all-zero rows are uniform.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TabularPolicy {
    table: BTreeMap<InfoStateKey, Vec<f64>>,
}

impl TabularPolicy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: InfoStateKey, weights: Vec<f64>) {
        self.table.insert(key, weights);
    }

    pub fn get(&self, key: &InfoStateKey) -> Option<&[f64]> {
        self.table.get(key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InfoStateKey, &[f64])> {
        self.table.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Entries of `other` overwrite entries of `self`.
    pub fn merge(mut self, other: TabularPolicy) -> Self {
        self.table.extend(other.table);
        self
    }
}

impl FromIterator<(InfoStateKey, Vec<f64>)> for TabularPolicy {
    fn from_iter<I: IntoIterator<Item = (InfoStateKey, Vec<f64>)>>(iter: I) -> Self {
        TabularPolicy { table: iter.into_iter().collect() }
    }
}

impl Policy for TabularPolicy {
    fn action_probabilities(&self, key: &InfoStateKey, legal: &[ActionId]) -> Distribution {
        match self.table.get(key) {
            Some(w) if w.len() == legal.len() => Distribution::from_weights(w),
            _ => Distribution::uniform(legal.len()),
        }
    }
}

/// Per-key convex combination `(1 - alpha) * average + alpha * best`.
///
/// Both policies must be defined on the same key set with matching action
/// counts. Rows are normalized before mixing.
pub fn mixture_policy(
    average: &TabularPolicy,
    best: &TabularPolicy,
    alpha: f64,
) -> Result<TabularPolicy> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    if let Some(k) = average.table.keys().find(|k| !best.table.contains_key(*k)) {
        return Err(Error::KeySpaceMismatch(k.to_string()));
    }
    if let Some(k) = best.table.keys().find(|k| !average.table.contains_key(*k)) {
        return Err(Error::KeySpaceMismatch(k.to_string()));
    }
    average
        .table
        .iter()
        .map(|(key, avg)| {
            let br = &best.table[key];
            if avg.len() != br.len() {
                return Err(Error::DimensionMismatch { expected: avg.len(), got: br.len() });
            }
            let avg = Distribution::from_weights(avg);
            let br = Distribution::from_weights(br);
            let mixed = if alpha == 0.0 {
                avg.into_vec()
            } else if alpha == 1.0 {
                br.into_vec()
            } else {
                avg.0.iter().zip(&br.0).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect()
            };
            Ok((key.clone(), mixed))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn key(s: &str) -> InfoStateKey {
        InfoStateKey::new(s)
    }

    #[test]
    fn mixture_endpoints_and_midpoint() {
        let avg: TabularPolicy = [(key("0:k"), vec![1.0, 0.0])].into_iter().collect();
        let br: TabularPolicy = [(key("0:k"), vec![0.0, 1.0])].into_iter().collect();
        assert_eq!(mixture_policy(&avg, &br, 0.0).unwrap().get(&key("0:k")), Some(&[1.0, 0.0][..]));
        assert_eq!(mixture_policy(&avg, &br, 1.0).unwrap().get(&key("0:k")), Some(&[0.0, 1.0][..]));
        let mid = mixture_policy(&avg, &br, 0.1).unwrap();
        let row = mid.get(&key("0:k")).unwrap();
        assert!((row[0] - 0.9).abs() < 1e-15 && (row[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn mixture_rejects_key_space_mismatch() {
        let avg: TabularPolicy = [(key("0:a"), vec![1.0, 0.0])].into_iter().collect();
        let br: TabularPolicy = [(key("0:b"), vec![1.0, 0.0])].into_iter().collect();
        assert!(matches!(mixture_policy(&avg, &br, 0.5), Err(Error::KeySpaceMismatch(_))));
    }

    #[test]
    fn missing_keys_are_uniform() {
        let p = TabularPolicy::new();
        assert_eq!(p.action_probabilities(&key("0:x"), &[0, 1, 2, 3]).probs(), &[0.25; 4]);
    }

    #[test]
    fn sampling_respects_zero_mass() {
        let d = Distribution::new(vec![0.0, 1.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..1000).all(|_| d.sample_index(&mut rng) == 1));
    }
}
