use super::{fmt_float, masked_mse, masked_softmax, parse_floats, TrainItem};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hidden-layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    /// No nonlinearity; the network is linear in its input.
    Identity,
}

/// Output head and the loss it is trained with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Head {
    /// Raw outputs, squared error over masked entries.
    Regression,
    /// Logits, cross-entropy of the masked softmax against the target.
    Classification,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpConfig {
    pub hidden: usize,
    pub activation: Activation,
    pub head: Head,
    /// Weights start uniform in `(-init_scale, init_scale)`, biases at zero.
    pub init_scale: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig { hidden: 64, activation: Activation::Tanh, head: Head::Regression, init_scale: 0.05 }
    }
}

/// `y = W2 act(W1 x + b1) + b2`, row-major weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    in_dim: usize,
    hidden: usize,
    out_dim: usize,
    activation: Activation,
    head: Head,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
}

struct Grads {
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
}

impl Grads {
    fn zeros(m: &Mlp) -> Self {
        Grads {
            w1: vec![0.0; m.w1.len()],
            b1: vec![0.0; m.b1.len()],
            w2: vec![0.0; m.w2.len()],
            b2: vec![0.0; m.b2.len()],
        }
    }

    fn flat(&self) -> impl Iterator<Item = f64> + '_ {
        self.w1.iter().chain(&self.b1).chain(&self.w2).chain(&self.b2).copied()
    }
}

impl Mlp {
    pub fn new(in_dim: usize, out_dim: usize, config: MlpConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = config.init_scale;
        let mut init = |n: usize| -> Vec<f64> {
            (0..n).map(|_| if s > 0.0 { rng.random_range(-s..s) } else { 0.0 }).collect()
        };
        let w1 = init(config.hidden * in_dim);
        let w2 = init(out_dim * config.hidden);
        Mlp {
            in_dim,
            hidden: config.hidden,
            out_dim,
            activation: config.activation,
            head: config.head,
            w1,
            b1: vec![0.0; config.hidden],
            w2,
            b2: vec![0.0; out_dim],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.out_dim
    }

    pub fn head(&self) -> Head {
        self.head
    }

    pub fn num_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    pub fn output_bias(&self) -> &[f64] {
        &self.b2
    }

    /// Zero every weight matrix, keeping biases.
    pub fn zero_weights(&mut self) {
        self.w1.iter_mut().chain(self.w2.iter_mut()).for_each(|w| *w = 0.0);
    }

    pub fn set_output_bias(&mut self, bias: &[f64]) {
        self.b2.copy_from_slice(bias);
    }

    fn param_mut(&mut self, mut i: usize) -> &mut f64 {
        for block in [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2] {
            if i < block.len() {
                return &mut block[i];
            }
            i -= block.len();
        }
        panic!("parameter index out of range")
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.in_dim {
            return Err(Error::DimensionMismatch { expected: self.in_dim, got: x.len() });
        }
        Ok(())
    }

    fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let h: Vec<f64> = (0..self.hidden)
            .map(|k| {
                let row = &self.w1[k * self.in_dim..(k + 1) * self.in_dim];
                let pre = self.b1[k] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
                match self.activation {
                    Activation::Tanh => pre.tanh(),
                    Activation::Identity => pre,
                }
            })
            .collect();
        let y = (0..self.out_dim)
            .map(|o| {
                let row = &self.w2[o * self.hidden..(o + 1) * self.hidden];
                self.b2[o] + row.iter().zip(&h).map(|(w, v)| w * v).sum::<f64>()
            })
            .collect();
        (h, y)
    }

    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.forward(x).1)
    }

    /// Scalar loss minimised for one example (half squared error or
    /// cross-entropy) and its gradient with respect to the outputs.
    fn example_loss(&self, y: &[f64], item: &TrainItem) -> (f64, Vec<f64>) {
        match self.head {
            Head::Regression => {
                let mut loss = 0.0;
                let grad = (0..self.out_dim)
                    .map(|j| {
                        if item.active(j) {
                            let d = y[j] - item.target[j];
                            loss += 0.5 * d * d;
                            d
                        } else {
                            0.0
                        }
                    })
                    .collect();
                (loss, grad)
            }
            Head::Classification => {
                let p = masked_softmax(y, item.mask.as_deref());
                let mass: f64 = (0..self.out_dim).filter(|&j| item.active(j)).map(|j| item.target[j]).sum();
                let mut loss = 0.0;
                let grad = (0..self.out_dim)
                    .map(|j| {
                        if item.active(j) {
                            if item.target[j] > 0.0 {
                                loss -= item.target[j] * p[j].max(1e-300).ln();
                            }
                            p[j] * mass - item.target[j]
                        } else {
                            0.0
                        }
                    })
                    .collect();
                (loss, grad)
            }
        }
    }

    fn reported_loss(&self, y: &[f64], item: &TrainItem) -> f64 {
        match self.head {
            Head::Regression => masked_mse(y, item),
            Head::Classification => self.example_loss(y, item).0,
        }
    }

    fn accumulate(&self, item: &TrainItem, grads: &mut Grads, scale: f64) {
        let x = &item.features;
        let (h, y) = self.forward(x);
        let (_, gy) = self.example_loss(&y, item);
        let mut gh = vec![0.0; self.hidden];
        for (o, &d) in gy.iter().enumerate() {
            let g = d * scale;
            if g == 0.0 {
                continue;
            }
            grads.b2[o] += g;
            let row = o * self.hidden;
            for k in 0..self.hidden {
                grads.w2[row + k] += g * h[k];
                gh[k] += self.w2[row + k] * g;
            }
        }
        for k in 0..self.hidden {
            let gpre = match self.activation {
                Activation::Tanh => gh[k] * (1.0 - h[k] * h[k]),
                Activation::Identity => gh[k],
            };
            grads.b1[k] += gpre;
            let row = k * self.in_dim;
            for (i, xi) in x.iter().enumerate() {
                grads.w1[row + i] += gpre * xi;
            }
        }
    }

    pub(super) fn fit_batch(&mut self, batch: &[TrainItem], lr: f64) -> Result<f64> {
        for item in batch {
            self.check_input(&item.features)?;
        }
        let n = batch.len() as f64;
        let mut grads = Grads::zeros(self);
        let mut loss = 0.0;
        for item in batch {
            let y = self.forward(&item.features).1;
            loss += self.reported_loss(&y, item);
            self.accumulate(item, &mut grads, 1.0 / n);
        }
        let step = |p: &mut [f64], g: &[f64]| p.iter_mut().zip(g).for_each(|(p, g)| *p -= lr * g);
        step(&mut self.w1, &grads.w1);
        step(&mut self.b1, &grads.b1);
        step(&mut self.w2, &grads.w2);
        step(&mut self.b2, &grads.b2);
        Ok(loss / n)
    }

    /// Compare backprop against central differences with step 1e-5 over
    /// every parameter. Relative error is `|a - n| / max(|a|, |n|, 1e-8)`.
    pub fn gradient_check(&self, example: &TrainItem) -> Result<f64> {
        self.check_input(&example.features)?;
        let mut grads = Grads::zeros(self);
        self.accumulate(example, &mut grads, 1.0);
        let analytic: Vec<f64> = grads.flat().collect();
        let h = 1e-5;
        let mut probe = self.clone();
        let mut worst: f64 = 0.0;
        for (i, a) in analytic.into_iter().enumerate() {
            let orig = *probe.param_mut(i);
            *probe.param_mut(i) = orig + h;
            let up = probe.example_loss(&probe.forward(&example.features).1, example).0;
            *probe.param_mut(i) = orig - h;
            let down = probe.example_loss(&probe.forward(&example.features).1, example).0;
            *probe.param_mut(i) = orig;
            let numeric = (up - down) / (2.0 * h);
            let denom = a.abs().max(numeric.abs()).max(1e-8);
            worst = worst.max((a - numeric).abs() / denom);
        }
        Ok(worst)
    }

    pub(super) fn to_checkpoint(&self) -> String {
        let act = match self.activation {
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        };
        let head = match self.head {
            Head::Regression => "regression",
            Head::Classification => "classification",
        };
        let mut out =
            format!("estimator-v1 mlp {}x{}x{} {act} {head}\n", self.in_dim, self.hidden, self.out_dim);
        let mut row = |values: &[f64]| {
            let v: Vec<String> = values.iter().map(|&x| fmt_float(x)).collect();
            out.push_str(&v.join(" "));
            out.push('\n');
        };
        for k in 0..self.hidden {
            row(&self.w1[k * self.in_dim..(k + 1) * self.in_dim]);
        }
        row(&self.b1);
        for o in 0..self.out_dim {
            row(&self.w2[o * self.hidden..(o + 1) * self.hidden]);
        }
        row(&self.b2);
        out
    }

    pub(super) fn from_checkpoint(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Checkpoint(format!("mlp checkpoint: {what}"));
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap_or_default().split_whitespace().collect();
        if header.len() != 5 {
            return Err(bad("header"));
        }
        let dims: Vec<usize> =
            header[2].split('x').map(|d| d.parse().map_err(|_| bad("dims"))).collect::<Result<_>>()?;
        let [in_dim, hidden, out_dim] = dims[..] else {
            return Err(bad("dims"));
        };
        let activation = match header[3] {
            "tanh" => Activation::Tanh,
            "identity" => Activation::Identity,
            _ => return Err(bad("activation")),
        };
        let head = match header[4] {
            "regression" => Head::Regression,
            "classification" => Head::Classification,
            _ => return Err(bad("head")),
        };
        let mut read = |n: usize| -> Result<Vec<f64>> {
            let v = parse_floats(lines.next().ok_or_else(|| bad("truncated"))?, ' ')?;
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            Ok(v)
        };
        let mut w1 = Vec::with_capacity(hidden * in_dim);
        for _ in 0..hidden {
            w1.extend(read(in_dim)?);
        }
        let b1 = read(hidden)?;
        let mut w2 = Vec::with_capacity(out_dim * hidden);
        for _ in 0..out_dim {
            w2.extend(read(hidden)?);
        }
        let b2 = read(out_dim)?;
        Ok(Mlp { in_dim, hidden, out_dim, activation, head, w1, b1, w2, b2 })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Estimator, TrainItem};
    use super::*;
    use crate::game::InfoStateKey;

    fn example(features: Vec<f64>, target: Vec<f64>, mask: Option<Vec<bool>>) -> TrainItem {
        TrainItem { key: InfoStateKey::new("0:x"), features, target, mask }
    }

    fn linear() -> MlpConfig {
        MlpConfig { hidden: 5, activation: Activation::Identity, ..MlpConfig::default() }
    }

    #[test]
    fn zero_weights_output_bias() {
        let mut m = Mlp::new(4, 3, MlpConfig::default(), 1);
        m.zero_weights();
        m.set_output_bias(&[0.5, -1.0, 2.0]);
        assert_eq!(m.predict(&[0.3, -0.2, 1.0, 4.0]).unwrap(), vec![0.5, -1.0, 2.0]);
    }

    #[test]
    fn input_dimension_is_checked() {
        let m = Mlp::new(4, 3, MlpConfig::default(), 1);
        assert_eq!(m.predict(&[1.0]), Err(Error::DimensionMismatch { expected: 4, got: 1 }));
    }

    #[test]
    fn linear_gradient_is_exact() {
        let m = Mlp::new(4, 3, MlpConfig { init_scale: 0.5, ..linear() }, 2);
        let ex = example(vec![0.3, -1.2, 0.7, 2.0], vec![1.0, -0.5, 0.25], None);
        assert!(m.gradient_check(&ex).unwrap() < 1e-7);
    }

    #[test]
    fn tanh_gradient_matches_finite_differences() {
        let m = Mlp::new(6, 4, MlpConfig { hidden: 16, init_scale: 0.5, ..MlpConfig::default() }, 3);
        let ex = example(vec![0.1, 0.9, -0.4, 0.0, 1.0, 0.5], vec![0.2, -0.1, 0.0, 0.7], Some(vec![true, false, true, true]));
        assert!(m.gradient_check(&ex).unwrap() < 1e-4);
        let cls = Mlp::new(
            6,
            4,
            MlpConfig { hidden: 16, init_scale: 0.5, head: Head::Classification, ..MlpConfig::default() },
            4,
        );
        let ex = example(vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0, 0.0], Some(vec![true, true, false, true]));
        assert!(cls.gradient_check(&ex).unwrap() < 1e-4);
    }

    #[test]
    fn zero_input_leaves_input_weights_without_gradient() {
        let m = Mlp::new(3, 2, MlpConfig { init_scale: 0.5, ..MlpConfig::default() }, 5);
        let ex = example(vec![0.0; 3], vec![1.0, -1.0], None);
        let mut g = Grads::zeros(&m);
        m.accumulate(&ex, &mut g, 1.0);
        assert!(g.w1.iter().all(|&w| w == 0.0));
        assert!(g.b1.iter().any(|&b| b != 0.0));
    }

    #[test]
    fn single_example_loss_does_not_increase() {
        let mut est = Estimator::mlp(4, 2, MlpConfig::default(), 6);
        let batch = [example(vec![1.0, 0.0, 0.5, -0.5], vec![0.8, -0.3], None)];
        let mut prev = f64::INFINITY;
        for _ in 0..100 {
            let loss = est.fit_batch(&batch, 0.01).unwrap();
            assert!(loss <= prev);
            prev = loss;
        }
    }

    #[test]
    fn fits_toy_regression() {
        // y = sin(2x) sampled at eight points in [-1, 1]
        let batch: Vec<TrainItem> = (0..8)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / 7.0;
                example(vec![x], vec![(2.0 * x).sin()], None)
            })
            .collect();
        let mut est = Estimator::mlp(1, 1, MlpConfig { hidden: 16, ..MlpConfig::default() }, 7);
        let mut loss = f64::INFINITY;
        for _ in 0..5000 {
            loss = est.fit_batch(&batch, 0.5).unwrap();
        }
        let final_mse = batch
            .iter()
            .map(|it| {
                let y = est.predict(it.input()).unwrap()[0];
                (y - it.target[0]).powi(2)
            })
            .sum::<f64>()
            / 8.0;
        assert!(final_mse < 1e-3, "mse {final_mse}, last reported {loss}");
    }

    #[test]
    fn identical_seeds_train_identically() {
        let batch = [example(vec![0.5, 0.5], vec![1.0, 0.0], None)];
        let run = || {
            let mut est = Estimator::mlp(2, 2, MlpConfig::default(), 9);
            for _ in 0..10 {
                est.fit_batch(&batch, 0.1).unwrap();
            }
            est
        };
        assert_eq!(run(), run());
    }
}
