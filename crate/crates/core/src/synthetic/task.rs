//! Two-class Gaussian mixture `X | Y = y ~ N(y mu, I_2)` with `y = ±1` and a
//! uniform prior, plus a covariate dislocation `X -> X + delta`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixtureTask {
    pub mu: [f64; 2],
    pub shift_delta: [f64; 2],
    pub n_train: usize,
    pub n_eval: usize,
    pub seed: u64,
}

impl Default for GaussianMixtureTask {
    fn default() -> Self {
        GaussianMixtureTask { mu: [2.0, 0.0], shift_delta: [0.0, 0.0], n_train: 2000, n_eval: 2000, seed: 0 }
    }
}

/// Covariates with class indices: `0` for `y = -1`, `1` for `y = +1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledData {
    pub x: Vec<[f64; 2]>,
    pub class: Vec<usize>,
}

impl LabeledData {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn shifted(&self, delta: [f64; 2]) -> LabeledData {
        LabeledData {
            x: self.x.iter().map(|p| [p[0] + delta[0], p[1] + delta[1]]).collect(),
            class: self.class.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskSample {
    pub train: LabeledData,
    pub eval: LabeledData,
    /// `eval` with `shift_delta` added to every covariate.
    pub eval_shifted: LabeledData,
}

fn draw(mu: [f64; 2], n: usize, mut rng: rng::StreamRng) -> LabeledData {
    let mut data = LabeledData::default();
    for _ in 0..n {
        let positive: bool = rng.random();
        let y = if positive { 1.0 } else { -1.0 };
        let e0: f64 = rng.sample(StandardNormal);
        let e1: f64 = rng.sample(StandardNormal);
        data.x.push([y * mu[0] + e0, y * mu[1] + e1]);
        data.class.push(usize::from(positive));
    }
    data
}

pub fn sample_task(task: &GaussianMixtureTask) -> TaskSample {
    let train = draw(task.mu, task.n_train, rng::stream(task.seed, 0));
    let eval = draw(task.mu, task.n_eval, rng::stream(task.seed, 1));
    let eval_shifted = eval.shifted(task.shift_delta);
    TaskSample { train, eval, eval_shifted }
}

/// `(W_2, H)` between the task distribution and its dislocation by a vector
/// of norm `norm_delta`: `W_2 = |delta|`, `H = sqrt(1 - exp(-|delta|^2 / 8))`.
pub fn shift_distances(norm_delta: f64) -> (f64, f64) {
    let h = (-(-norm_delta * norm_delta / 8.0).exp_m1()).max(0.0).sqrt();
    (norm_delta, h.min(1.0))
}
