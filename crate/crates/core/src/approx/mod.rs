//! Function approximation used by the learners: an exact tabular backend and
//! a single-hidden-layer feedforward network trained with plain SGD.
//!
//! Both backends see the same [`Input`] (key and feature vector) and store
//! padded output vectors; masking to legal actions is done by callers
//! through [`TrainItem::mask`].

mod mlp;
mod tabular;

pub use mlp::{Activation, Head, Mlp, MlpConfig};
pub use tabular::TabularEstimator;

use crate::error::{Error, Result};
use crate::game::InfoStateKey;
use std::fmt;
use std::str::FromStr;

/// Which estimator family backs a learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Tabular,
    Mlp,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Tabular => "tabular",
            Backend::Mlp => "mlp",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tabular" => Ok(Backend::Tabular),
            "mlp" => Ok(Backend::Mlp),
            _ => Err(Error::InvalidArgument(format!("unknown backend `{s}` (tabular, mlp)"))),
        }
    }
}

/// What an estimator is evaluated on. The tabular backend reads the key,
/// the network reads the features.
#[derive(Debug, Clone, Copy)]
pub struct Input<'a> {
    pub key: &'a InfoStateKey,
    pub features: &'a [f64],
}

/// One supervised example.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainItem {
    pub key: InfoStateKey,
    pub features: Vec<f64>,
    pub target: Vec<f64>,
    /// Entries that take part in the loss; `None` means all.
    pub mask: Option<Vec<bool>>,
}

impl TrainItem {
    pub fn input(&self) -> Input<'_> {
        Input { key: &self.key, features: &self.features }
    }

    pub(crate) fn active(&self, j: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[j])
    }
}

fn validate_batch(batch: &[TrainItem], out_dim: usize, lr: f64) -> Result<()> {
    if !(lr > 0.0 && lr.is_finite()) {
        return Err(Error::InvalidArgument(format!("learning rate must be positive, got {lr}")));
    }
    if batch.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    for item in batch {
        if item.target.len() != out_dim {
            return Err(Error::DimensionMismatch { expected: out_dim, got: item.target.len() });
        }
        if item.target.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("training target"));
        }
        if let Some(mask) = &item.mask {
            if mask.len() != out_dim {
                return Err(Error::DimensionMismatch { expected: out_dim, got: mask.len() });
            }
            if !mask.iter().any(|&m| m) {
                return Err(Error::InvalidArgument("mask selects no output".into()));
            }
        }
    }
    Ok(())
}

/// Masked mean squared error of one prediction.
pub(crate) fn masked_mse(pred: &[f64], item: &TrainItem) -> f64 {
    let (sum, n) = pred
        .iter()
        .zip(&item.target)
        .enumerate()
        .filter(|(j, _)| item.active(*j))
        .fold((0.0, 0usize), |(s, n), (_, (y, t))| (s + (y - t) * (y - t), n + 1));
    sum / n as f64
}

/// Softmax restricted to `mask`; masked-out entries get probability zero.
pub fn masked_softmax(logits: &[f64], mask: Option<&[bool]>) -> Vec<f64> {
    let on = |j: usize| mask.is_none_or(|m| m[j]);
    let max = logits
        .iter()
        .enumerate()
        .filter(|(j, _)| on(*j))
        .map(|(_, &l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> =
        logits.iter().enumerate().map(|(j, &l)| if on(j) { (l - max).exp() } else { 0.0 }).collect();
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= sum);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    Tabular(TabularEstimator),
    Mlp(Mlp),
}

impl Estimator {
    pub fn tabular(out_dim: usize) -> Self {
        Estimator::Tabular(TabularEstimator::new(out_dim))
    }

    pub fn mlp(in_dim: usize, out_dim: usize, config: MlpConfig, seed: u64) -> Self {
        Estimator::Mlp(Mlp::new(in_dim, out_dim, config, seed))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Estimator::Tabular(_) => Backend::Tabular,
            Estimator::Mlp(_) => Backend::Mlp,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Estimator::Tabular(t) => t.output_dim(),
            Estimator::Mlp(m) => m.output_dim(),
        }
    }

    pub fn predict(&self, input: Input<'_>) -> Result<Vec<f64>> {
        match self {
            Estimator::Tabular(t) => Ok(t.predict(input.key)),
            Estimator::Mlp(m) => m.predict(input.features),
        }
    }

    /// One training step on `batch`; returns the loss measured before the
    /// step.
    pub fn fit_batch(&mut self, batch: &[TrainItem], lr: f64) -> Result<f64> {
        validate_batch(batch, self.output_dim(), lr)?;
        match self {
            Estimator::Tabular(t) => Ok(t.fit_batch(batch, lr)),
            Estimator::Mlp(m) => m.fit_batch(batch, lr),
        }
    }

    /// Maximum relative error between analytic and finite-difference
    /// gradients. Only defined for the network backend.
    pub fn gradient_check(&self, example: &TrainItem) -> Result<f64> {
        match self {
            Estimator::Tabular(_) => {
                Err(Error::InvalidArgument("gradient_check needs an mlp estimator".into()))
            }
            Estimator::Mlp(m) => m.gradient_check(example),
        }
    }

    /// Text checkpoint: `estimator-v1 <kind> <dims>` header, then one line
    /// per parameter row with 17 significant digits.
    pub fn to_checkpoint(&self) -> String {
        match self {
            Estimator::Tabular(t) => t.to_checkpoint(),
            Estimator::Mlp(m) => m.to_checkpoint(),
        }
    }

    pub fn from_checkpoint(text: &str) -> Result<Self> {
        let header = text.lines().next().ok_or_else(|| Error::Checkpoint("empty file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("estimator-v1") {
            return Err(Error::Checkpoint(format!("bad header `{header}`")));
        }
        match fields.next() {
            Some("tabular") => TabularEstimator::from_checkpoint(text).map(Estimator::Tabular),
            Some("mlp") => Mlp::from_checkpoint(text).map(Estimator::Mlp),
            other => Err(Error::Checkpoint(format!("unknown estimator kind {other:?}"))),
        }
    }
}

/// Float rendering used by every checkpoint: 17 significant digits.
pub(crate) fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn parse_floats(line: &str, sep: char) -> Result<Vec<f64>> {
    if line.is_empty() {
        return Ok(Vec::new());
    }
    line.split(sep)
        .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Checkpoint(format!("`{v}`: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(key: &str, target: Vec<f64>, mask: Option<Vec<bool>>) -> TrainItem {
        TrainItem { key: InfoStateKey::new(key), features: vec![1.0, 0.0], target, mask }
    }

    #[test]
    fn rejects_bad_batches() {
        let mut est = Estimator::tabular(2);
        assert!(est.fit_batch(&[], 0.1).is_err());
        assert!(est.fit_batch(&[item("0:a", vec![1.0, 2.0], None)], 0.0).is_err());
        assert_eq!(
            est.fit_batch(&[item("0:a", vec![f64::NAN, 2.0], None)], 0.1),
            Err(Error::NonFinite("training target"))
        );
        assert!(est.fit_batch(&[item("0:a", vec![1.0], None)], 0.1).is_err());
        assert!(est.fit_batch(&[item("0:a", vec![1.0, 1.0], Some(vec![false, false]))], 0.1).is_err());
    }

    #[test]
    fn softmax_ignores_masked_logits() {
        let p = masked_softmax(&[0.0, 100.0, 0.0], Some(&[true, false, true]));
        assert_eq!(p, vec![0.5, 0.0, 0.5]);
    }

    #[test]
    fn checkpoint_roundtrip_is_exact() {
        let mut est = Estimator::mlp(2, 3, MlpConfig::default(), 11);
        let batch = [item("0:a", vec![0.1, -0.3, 1.0 / 3.0], None)];
        est.fit_batch(&batch, 0.05).unwrap();
        let text = est.to_checkpoint();
        assert_eq!(Estimator::from_checkpoint(&text).unwrap(), est);

        let mut tab = Estimator::tabular(2);
        tab.fit_batch(&[item("1:x", vec![0.7, 1e-300], None)], 0.3).unwrap();
        assert_eq!(Estimator::from_checkpoint(&tab.to_checkpoint()).unwrap(), tab);
    }
}
