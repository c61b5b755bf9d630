use super::{fmt_float, masked_mse, parse_floats, TrainItem};
use crate::error::{Error, Result};
use crate::game::InfoStateKey;
use std::collections::BTreeMap;

/// One value row per key, zero-initialised. Training moves each active
/// entry a fraction `lr` of the way to its target, item by item.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularEstimator {
    out_dim: usize,
    rows: BTreeMap<InfoStateKey, Vec<f64>>,
}

impl TabularEstimator {
    pub fn new(out_dim: usize) -> Self {
        TabularEstimator { out_dim, rows: BTreeMap::new() }
    }

    pub fn output_dim(&self) -> usize {
        self.out_dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn predict(&self, key: &InfoStateKey) -> Vec<f64> {
        self.rows.get(key).cloned().unwrap_or_else(|| vec![0.0; self.out_dim])
    }

    pub(super) fn fit_batch(&mut self, batch: &[TrainItem], lr: f64) -> f64 {
        let loss = batch.iter().map(|item| masked_mse(&self.predict(&item.key), item)).sum::<f64>()
            / batch.len() as f64;
        for item in batch {
            let row = self.rows.entry(item.key.clone()).or_insert_with(|| vec![0.0; self.out_dim]);
            for (j, (v, t)) in row.iter_mut().zip(&item.target).enumerate() {
                if item.active(j) {
                    *v += lr * (t - *v);
                }
            }
        }
        loss
    }

    pub(super) fn to_checkpoint(&self) -> String {
        let mut out = format!("estimator-v1 tabular {}\n", self.out_dim);
        for (key, row) in &self.rows {
            let values: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
            out.push_str(&format!("{key}\t{}\n", values.join(" ")));
        }
        out
    }

    pub(super) fn from_checkpoint(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let out_dim: usize = header
            .split_whitespace()
            .nth(2)
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Checkpoint(format!("bad tabular header `{header}`")))?;
        let mut rows = BTreeMap::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let (key, values) = line
                .split_once('\t')
                .ok_or_else(|| Error::Checkpoint(format!("bad tabular row `{line}`")))?;
            let values = parse_floats(values, ' ')?;
            if values.len() != out_dim {
                return Err(Error::DimensionMismatch { expected: out_dim, got: values.len() });
            }
            rows.insert(InfoStateKey::new(key), values);
        }
        Ok(TabularEstimator { out_dim, rows })
    }
}
