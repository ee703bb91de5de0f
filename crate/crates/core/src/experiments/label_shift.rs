//! Label-shift Monte Carlo: random shifted class marginals, their exact
//! reweighted 0-1 loss, and the certificate band at the matching radius.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::bounds::{
    lower_bound, max_valid_radius_lower, max_valid_radius_upper, upper_bound, HellingerRadius, LossStatistics,
};
use crate::error::{CertError, Result};
use crate::exec::Execution;
use crate::losses::PredictionSample;
use crate::rng;
use crate::shifts::{label_shift_hellinger, DiscreteDistribution};

/// Class marginal and per-class conditional 0-1 loss of a classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassConditional {
    /// Original label of each class, in sorted order.
    pub labels: Vec<i64>,
    pub prior: DiscreteDistribution,
    pub class_loss: Vec<f64>,
    pub ceiling: f64,
}

impl ClassConditional {
    pub fn from_predictions(sample: &PredictionSample) -> Result<Self> {
        let mut counts: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
        for &(pred, label) in sample.records() {
            let e = counts.entry(label).or_default();
            e.0 += 1;
            e.1 += usize::from(pred != label);
        }
        let labels: Vec<i64> = counts.keys().copied().collect();
        let prior = DiscreteDistribution::new(counts.values().map(|c| c.0 as f64).collect())?;
        let class_loss = counts.values().map(|c| c.1 as f64 / c.0 as f64).collect();
        Ok(ClassConditional { labels, prior, class_loss, ceiling: 1.0 })
    }

    pub fn classes(&self) -> usize {
        self.labels.len()
    }

    /// Loss under class marginal `q`; classes past the known ones carry the
    /// ceiling loss.
    pub fn reweighted_loss(&self, q: &DiscreteDistribution) -> f64 {
        q.probs()
            .iter()
            .enumerate()
            .map(|(i, &w)| w * self.class_loss.get(i).copied().unwrap_or(self.ceiling))
            .sum()
    }

    /// Mean and variance of the pointwise 0-1 loss under the reference joint
    /// distribution.
    pub fn stats(&self) -> Result<LossStatistics> {
        let e = self.prior.expectation(&self.class_loss);
        LossStatistics::new(e, e * (1.0 - e), self.ceiling)
    }
}

/// Synthetic `classes`-way prediction data with random class sizes and
/// per-class error rates between 2% and 30%.
pub fn synthetic_predictions(classes: usize, n: usize, seed: u64) -> Result<PredictionSample> {
    if classes < 2 || n == 0 {
        return Err(CertError::Degenerate("need at least two classes and one record".into()));
    }
    let mut g = rng::stream(seed, 0);
    let weights: Vec<f64> = (0..classes).map(|_| 0.5 + g.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let errors: Vec<f64> = (0..classes).map(|_| 0.02 + 0.28 * g.random::<f64>()).collect();
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let mut u = g.random::<f64>() * total;
        let mut y = classes - 1;
        for (c, w) in weights.iter().enumerate() {
            if u < *w {
                y = c;
                break;
            }
            u -= w;
        }
        let pred = if g.random::<f64>() < errors[y] {
            (y + 1 + g.random_range(0..classes - 1)) % classes
        } else {
            y
        };
        records.push((pred as i64, y as i64));
    }
    PredictionSample::new(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    /// Dirichlet perturbation of the observed marginal.
    Resample,
    /// Zeroing a random subset of classes.
    Remove,
    /// Moving mass to classes never seen under the reference.
    Unseen,
}

impl Mechanism {
    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Resample => "resample",
            Mechanism::Remove => "remove",
            Mechanism::Unseen => "unseen",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftPoint {
    pub trial: usize,
    pub mechanism: Mechanism,
    pub hellinger: f64,
    pub loss: f64,
}

fn dirichlet(alpha: &[f64], g: &mut rng::StreamRng) -> Option<Vec<f64>> {
    let draws: Vec<f64> = alpha
        .iter()
        .map(|&a| if a > 0.0 { Gamma::new(a, 1.0).map(|d| d.sample(g)).unwrap_or(0.0) } else { 0.0 })
        .collect();
    (draws.iter().sum::<f64>() > 0.0).then_some(draws)
}

fn shifted_marginal(
    cc: &ClassConditional,
    mechanism: Mechanism,
    unseen: usize,
    g: &mut rng::StreamRng,
) -> DiscreteDistribution {
    let p = cc.prior.probs();
    let k = p.len();
    let weights = match mechanism {
        Mechanism::Resample => {
            // concentration spans weak to strong perturbations
            let conc = 10f64.powf(g.random_range(-1.0..3.0)) * k as f64;
            let alpha: Vec<f64> = p.iter().map(|&pi| conc * pi).collect();
            dirichlet(&alpha, g).unwrap_or_else(|| p.to_vec())
        }
        Mechanism::Remove => {
            let positive: Vec<usize> = (0..k).filter(|&i| p[i] > 0.0).collect();
            let mut order = positive.clone();
            order.shuffle(g);
            let drop = g.random_range(1..positive.len().max(2));
            let mut w = p.to_vec();
            for &i in order.iter().take(drop.min(positive.len() - 1)) {
                w[i] = 0.0;
            }
            w
        }
        Mechanism::Unseen => {
            let mass: f64 = g.random();
            let extra = dirichlet(&vec![1.0; unseen], g).unwrap_or_else(|| vec![1.0; unseen]);
            let extra_total: f64 = extra.iter().sum();
            let mut w: Vec<f64> = p.iter().map(|&pi| (1.0 - mass) * pi).collect();
            w.extend(extra.iter().map(|e| mass * e / extra_total));
            w
        }
    };
    DiscreteDistribution::new(weights).unwrap_or_else(|_| cc.prior.clone())
}

/// Samples `trials` shifted marginals, cycling through the mechanisms.
/// Trial `t` draws from its own stream, so results do not depend on the
/// execution mode.
pub fn sample_shifts(
    cc: &ClassConditional,
    trials: usize,
    seed: u64,
    unseen: usize,
    execution: Execution,
) -> Vec<ShiftPoint> {
    let mechanisms: Vec<Mechanism> = if unseen > 0 {
        vec![Mechanism::Resample, Mechanism::Remove, Mechanism::Unseen]
    } else {
        vec![Mechanism::Resample, Mechanism::Remove]
    };
    execution.map_indexed(trials, |t| {
        let mut g = rng::stream(seed, t as u64);
        let mechanism = mechanisms[t % mechanisms.len()];
        let q = shifted_marginal(cc, mechanism, unseen, &mut g);
        ShiftPoint {
            trial: t,
            mechanism,
            hellinger: label_shift_hellinger(&cc.prior, &q),
            loss: cc.reweighted_loss(&q),
        }
    })
}

/// Certificate band at one radius. Outside the validity radius of a side,
/// that side falls back to the trivial value (`M` or `0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub radius: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_valid: bool,
    pub upper_valid: bool,
}

pub fn certificate_band(stats: &LossStatistics, radius: f64) -> Result<Band> {
    let rho = HellingerRadius::new(radius.clamp(0.0, 1.0))?;
    let upper_valid = rho.value() <= max_valid_radius_upper(stats);
    let lower_valid = rho.value() <= max_valid_radius_lower(stats);
    let upper = if upper_valid { upper_bound(stats, rho)?.bound } else { stats.ceiling() };
    let lower = if lower_valid { lower_bound(stats, rho)?.bound } else { 0.0 };
    Ok(Band { radius: rho.value(), lower, upper, lower_valid, upper_valid })
}

/// Band sampled at `points` equally spaced radii in `[0, 1]`.
pub fn certificate_curve(stats: &LossStatistics, points: usize) -> Result<Vec<Band>> {
    let n = points.max(2);
    (0..n).map(|i| certificate_band(stats, i as f64 / (n - 1) as f64)).collect()
}

pub const CONTAINMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelShiftOutcome {
    pub classes: ClassConditional,
    pub points: Vec<ShiftPoint>,
    pub bands: Vec<Band>,
    pub curve: Vec<Band>,
    pub contained: usize,
    pub trivial_upper: usize,
    pub trivial_lower: usize,
}

impl LabelShiftOutcome {
    pub fn all_contained(&self) -> bool {
        self.contained == self.points.len()
    }
}

pub fn run_label_shift(
    sample: &PredictionSample,
    trials: usize,
    seed: u64,
    unseen: usize,
    execution: Execution,
) -> Result<LabelShiftOutcome> {
    let cc = ClassConditional::from_predictions(sample)?;
    let stats = cc.stats()?;
    let points = sample_shifts(&cc, trials, seed, unseen, execution);
    let bands: Vec<Band> =
        points.iter().map(|p| certificate_band(&stats, p.hellinger)).collect::<Result<_>>()?;
    let contained = points
        .iter()
        .zip(&bands)
        .filter(|(p, b)| p.loss >= b.lower - CONTAINMENT_TOL && p.loss <= b.upper + CONTAINMENT_TOL)
        .count();
    Ok(LabelShiftOutcome {
        trivial_upper: bands.iter().filter(|b| !b.upper_valid).count(),
        trivial_lower: bands.iter().filter(|b| !b.lower_valid).count(),
        curve: certificate_curve(&stats, 200)?,
        classes: cc,
        points,
        bands,
        contained,
    })
}
