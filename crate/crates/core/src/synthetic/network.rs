//! A small fully connected ELU network with a softmax/JSD head, trained by
//! mini-batch gradient descent under spectral normalization.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{CertError, Result};
use crate::exec::compensated_mean;
use crate::losses::{jsd_gradient, jsd_loss_logits};
use crate::rng;

use super::task::LabeledData;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data.chunks_exact(self.cols).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul_vec_t(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (row, &vi) in self.data.chunks_exact(self.cols).zip(v) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * vi;
            }
        }
        out
    }

    fn scale(&mut self, s: f64) {
        for x in &mut self.data {
            *x *= s;
        }
    }
}

fn unit(v: &mut [f64]) -> f64 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Largest singular value by power iteration on `M^T M`, started from `v`.
/// Stops once the relative change of the estimate drops below `tol`.
/// Returns the estimate and the final right singular vector.
pub fn power_iteration(m: &Matrix, v: &[f64], max_iter: usize, tol: f64) -> (f64, Vec<f64>) {
    let mut v = v.to_vec();
    if unit(&mut v) == 0.0 {
        v = vec![1.0; m.cols];
        unit(&mut v);
    }
    let mut sigma = 0.0;
    for _ in 0..max_iter {
        let mut w = m.mul_vec_t(&m.mul_vec(&v));
        let norm = unit(&mut w);
        if norm == 0.0 {
            return (0.0, v);
        }
        let next = norm.sqrt();
        v = w;
        let done = (next - sigma).abs() <= tol * next;
        sigma = next;
        if done {
            break;
        }
    }
    // Rayleigh value at the final vector
    let mv = m.mul_vec(&v);
    let exact = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
    (exact.max(sigma), v)
}

/// Operator norm to full double precision, from a fixed start.
pub fn operator_norm(m: &Matrix) -> f64 {
    let start: Vec<f64> = (0..m.cols).map(|i| 1.0 + 0.1 * i as f64).collect();
    power_iteration(m, &start, 100_000, 1e-15).0
}

pub fn elu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        x.exp_m1()
    }
}

fn elu_prime(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        x.exp()
    }
}

pub const SPECTRAL_ITERATIONS: usize = 50;
pub const SPECTRAL_TOL: f64 = 1e-8;

/// `x -> ELU(W_L ... ELU(W_1 x))`, with two output logits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallNetwork {
    widths: Vec<usize>,
    weights: Vec<Matrix>,
    #[serde(skip)]
    singular_vectors: Vec<Vec<f64>>,
}

impl SmallNetwork {
    /// Random network with the given hidden widths between the 2-d input and
    /// the 2 logits. Weights start Gaussian with variance `2 / fan_in` and
    /// are spectrally normalized.
    pub fn new(hidden: &[usize], seed: u64) -> Result<Self> {
        if hidden.contains(&0) {
            return Err(CertError::Degenerate("hidden layer of width 0".into()));
        }
        let mut widths = vec![2];
        widths.extend_from_slice(hidden);
        widths.push(2);
        let mut g = rng::stream(seed, 0x6e6e);
        let weights: Vec<Matrix> = widths
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let sd = (2.0 / fan_in as f64).sqrt();
                Matrix {
                    rows: fan_out,
                    cols: fan_in,
                    data: (0..fan_in * fan_out).map(|_| sd * g.sample::<f64, _>(StandardNormal)).collect(),
                }
            })
            .collect();
        Self::from_weights(weights)
    }

    /// Wraps explicit weights and spectrally normalizes them.
    pub fn from_weights(weights: Vec<Matrix>) -> Result<Self> {
        let Some(first) = weights.first() else {
            return Err(CertError::Degenerate("network without layers".into()));
        };
        let mut widths = vec![first.cols];
        for w in &weights {
            if w.cols != *widths.last().unwrap() || w.data.len() != w.rows * w.cols {
                return Err(CertError::Degenerate("inconsistent layer shapes".into()));
            }
            widths.push(w.rows);
        }
        if widths[0] != 2 || *widths.last().unwrap() != 2 {
            return Err(CertError::Degenerate("network must map R^2 to 2 logits".into()));
        }
        let singular_vectors = weights.iter().map(|w| vec![1.0; w.cols]).collect();
        let mut net = SmallNetwork { widths, weights, singular_vectors };
        net.normalize(100_000, 1e-15);
        Ok(net)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn hidden_depth(&self) -> usize {
        self.weights.len() - 1
    }

    /// Scales each weight matrix by `1 / max(1, sigma)`.
    fn normalize(&mut self, iters: usize, tol: f64) {
        if self.singular_vectors.len() != self.weights.len() {
            self.singular_vectors = self.weights.iter().map(|w| vec![1.0; w.cols]).collect();
        }
        for (w, v) in self.weights.iter_mut().zip(&mut self.singular_vectors) {
            let (sigma, next) = power_iteration(w, v, iters, tol);
            *v = next;
            if sigma > 1.0 {
                w.scale(1.0 / sigma);
            }
        }
    }

    pub fn spectral_normalize(&mut self) {
        self.normalize(SPECTRAL_ITERATIONS, SPECTRAL_TOL);
    }

    pub fn operator_norms(&self) -> Vec<f64> {
        self.weights.iter().map(operator_norm).collect()
    }

    /// Pre-activations of every layer for input `x`.
    fn forward_trace(&self, x: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut acts = vec![x.to_vec()];
        let mut pre = Vec::with_capacity(self.weights.len());
        for w in &self.weights {
            let h = w.mul_vec(acts.last().unwrap());
            acts.push(h.iter().map(|&z| elu(z)).collect());
            pre.push(h);
        }
        (acts, pre)
    }

    pub fn logits(&self, x: &[f64; 2]) -> Vec<f64> {
        self.forward_trace(x).0.pop().unwrap()
    }

    pub fn predict(&self, x: &[f64; 2]) -> usize {
        let z = self.logits(x);
        usize::from(z[1] > z[0])
    }

    pub fn loss(&self, x: &[f64; 2], class: usize) -> f64 {
        jsd_loss_logits(&self.logits(x), class)
    }

    /// Per-record JSD losses.
    pub fn losses(&self, data: &LabeledData) -> Vec<f64> {
        data.x.iter().zip(&data.class).map(|(x, &c)| self.loss(x, c)).collect()
    }

    pub fn mean_loss(&self, data: &LabeledData) -> f64 {
        compensated_mean(&self.losses(data))
    }

    pub fn error_rate(&self, data: &LabeledData) -> f64 {
        let wrong = data.x.iter().zip(&data.class).filter(|(x, &c)| self.predict(x) != c).count();
        wrong as f64 / data.len().max(1) as f64
    }

    /// Backpropagates the loss at one record; accumulates parameter gradients
    /// into `grads` (if given) and returns the loss and its input gradient.
    fn backward(&self, x: &[f64], class: usize, grads: Option<&mut [Matrix]>) -> (f64, Vec<f64>) {
        let (acts, pre) = self.forward_trace(x);
        let logits = acts.last().unwrap();
        let loss = jsd_loss_logits(logits, class);
        let mut upstream = jsd_gradient(logits, class);
        let mut grads = grads;
        for l in (0..self.weights.len()).rev() {
            let dh: Vec<f64> = upstream.iter().zip(&pre[l]).map(|(g, &h)| g * elu_prime(h)).collect();
            if let Some(gs) = grads.as_deref_mut() {
                let g = &mut gs[l];
                for (r, &d) in dh.iter().enumerate() {
                    for (c, &a) in acts[l].iter().enumerate() {
                        g.data[r * g.cols + c] += d * a;
                    }
                }
            }
            upstream = self.weights[l].mul_vec_t(&dh);
        }
        (loss, upstream)
    }

    /// Loss and its gradient with respect to the covariates.
    pub fn input_gradient(&self, x: &[f64; 2], class: usize) -> (f64, [f64; 2]) {
        let (loss, g) = self.backward(x, class, None);
        (loss, [g[0], g[1]])
    }

    /// Mean loss over `indices` and its parameter gradient.
    pub fn loss_and_gradient(&self, data: &LabeledData, indices: &[usize]) -> (f64, Vec<Matrix>) {
        let mut grads: Vec<Matrix> = self.weights.iter().map(|w| Matrix::zeros(w.rows, w.cols)).collect();
        let mut total = 0.0;
        for &i in indices {
            total += self.backward(&data.x[i], data.class[i], Some(&mut grads)).0;
        }
        let scale = 1.0 / indices.len().max(1) as f64;
        for g in &mut grads {
            g.scale(scale);
        }
        (total * scale, grads)
    }

    /// Mutable access for finite-difference checks.
    pub fn weight_mut(&mut self, layer: usize, index: usize) -> &mut f64 {
        &mut self.weights[layer].data[index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub steps: usize,
    pub learning_rate: f64,
    /// Step `t` uses `learning_rate / (1 + decay t)`.
    pub decay: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig { steps: 2000, learning_rate: 2.0, decay: 0.05, batch_size: 128, seed: 0 }
    }
}

/// Mini-batch gradient descent on the mean JSD loss; batches are drawn from
/// per-epoch shuffles and spectral normalization follows every update.
pub fn train_network(net: SmallNetwork, data: &LabeledData, cfg: &TrainingConfig) -> Result<SmallNetwork> {
    Ok(train_network_with_history(net, data, cfg, 0)?.0)
}

/// As [`train_network`], also returning the full-data training loss before
/// the first step and after every `every` steps (`every = 0` records nothing).
pub fn train_network_with_history(
    mut net: SmallNetwork,
    data: &LabeledData,
    cfg: &TrainingConfig,
    every: usize,
) -> Result<(SmallNetwork, Vec<f64>)> {
    let mut history = Vec::new();
    if data.is_empty() || cfg.steps == 0 {
        return Ok((net, history));
    }
    if every > 0 {
        history.push(net.mean_loss(data));
    }
    let mut g = rng::stream(cfg.seed, 0x7472);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let batch = cfg.batch_size.clamp(1, data.len());
    let mut cursor = data.len();
    for step in 0..cfg.steps {
        if cursor + batch > order.len() {
            order.shuffle(&mut g);
            cursor = 0;
        }
        let idx = &order[cursor..cursor + batch];
        cursor += batch;
        let (loss, grads) = net.loss_and_gradient(data, idx);
        if !loss.is_finite() {
            return Err(CertError::TrainingDiverged { step });
        }
        let rate = cfg.learning_rate / (1.0 + cfg.decay * step as f64);
        for (w, gr) in net.weights.iter_mut().zip(&grads) {
            for (a, b) in w.data.iter_mut().zip(&gr.data) {
                *a -= rate * b;
            }
        }
        if net.weights.iter().any(|w| w.data.iter().any(|x| !x.is_finite())) {
            return Err(CertError::TrainingDiverged { step });
        }
        net.spectral_normalize();
        if every > 0 && (step + 1) % every == 0 {
            history.push(net.mean_loss(data));
        }
    }
    Ok((net, history))
}
