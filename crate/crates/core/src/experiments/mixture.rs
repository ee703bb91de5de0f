//! Covariate shift by mixing with a distribution of disjoint support.
//!
//! Records carry a digit and a color. Under `P` the color tracks the true
//! label (red for high digits, green otherwise); under `Q` the colors are
//! blue and yellow with the association reversed. Observed labels are the
//! true labels flipped with a small noise rate. The fixed classifier reads
//! only the color, so it errs at the noise rate on `P` and at one minus the
//! noise rate on `Q`.
//!
//! Each mixture keeps a random `gamma` fraction of the reference records and
//! fills the rest with fresh draws from `Q`, so at `gamma = 1` it is the
//! reference sample itself. AUC is certified from below only.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::HellingerRadius;
use crate::error::Result;
use crate::exec::Execution;
use crate::experiments::label_shift::CONTAINMENT_TOL;
use crate::losses::{auc_estimate, auc_pair_sample, ScoredSample};
use crate::rng;
use crate::sample::{
    corollary_lower_bound, corollary_upper_bound, ConfidenceBudget, EmpiricalSample, SampleStats,
};
use crate::shifts::{auc_composite_radius, mixture_hellinger_disjoint};
use crate::CertError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Color {
    Red,
    Green,
    Blue,
    Yellow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Record {
    label: u8,
    color: Color,
    jitter: f64,
}

impl Record {
    fn predicted(&self) -> u8 {
        u8::from(matches!(self.color, Color::Red | Color::Blue))
    }

    fn score(&self) -> f64 {
        f64::from(self.predicted()) + 0.5 * self.jitter
    }

    fn loss(&self) -> f64 {
        if self.predicted() == self.label {
            0.0
        } else {
            1.0
        }
    }
}

fn draw(from_p: bool, noise: f64, g: &mut rng::StreamRng) -> Record {
    let digit: u8 = g.random_range(0..10);
    let truth = u8::from(digit >= 5);
    let label = if g.random::<f64>() < noise { 1 - truth } else { truth };
    let color = match (from_p, truth) {
        (true, 1) => Color::Red,
        (true, _) => Color::Green,
        (false, 1) => Color::Yellow,
        (false, _) => Color::Blue,
    };
    Record { label, color, jitter: g.random() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureConfig {
    pub gammas: Vec<f64>,
    pub label_noise: f64,
    /// Size of the reference sample from `P` and of every mixture sample.
    pub n_reference: usize,
    pub delta: f64,
    pub seed: u64,
}

impl Default for MixtureConfig {
    fn default() -> Self {
        MixtureConfig {
            gammas: (1..=20).map(|i| i as f64 / 20.0).collect(),
            label_noise: 0.05,
            n_reference: 20_000,
            delta: 0.01,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureRow {
    pub gamma: f64,
    pub hellinger: f64,
    pub composite_radius: f64,
    pub loss: f64,
    pub loss_lower: f64,
    pub loss_upper: f64,
    pub auc: f64,
    pub auc_lower: f64,
    /// Whether each certificate was inside its validity radius; outside it
    /// the trivial value is reported.
    pub loss_lower_valid: bool,
    pub loss_upper_valid: bool,
    pub auc_lower_valid: bool,
}

impl MixtureRow {
    pub fn contains_loss(&self) -> bool {
        self.loss_lower - CONTAINMENT_TOL <= self.loss && self.loss <= self.loss_upper + CONTAINMENT_TOL
    }

    pub fn contains_auc(&self) -> bool {
        self.auc_lower - CONTAINMENT_TOL <= self.auc
    }
}

/// Upper and lower certificates, replacing an out-of-validity side by the
/// trivial bound of the `[0, 1]` range.
fn band(sample: &EmpiricalSample, rho: HellingerRadius, delta: f64) -> Result<(f64, bool, f64, bool)> {
    let upper = match corollary_upper_bound(sample, rho, &ConfidenceBudget::two_way(delta)?) {
        Ok(r) => (r.bound, true),
        Err(CertError::RadiusExceedsValidity { .. }) => (sample.ceiling(), false),
        Err(e) => return Err(e),
    };
    let lower = match corollary_lower_bound(sample, rho, &ConfidenceBudget::three_way(delta)?) {
        Ok(r) => (r.bound, true),
        Err(CertError::RadiusExceedsValidity { .. }) => (0.0, false),
        Err(e) => return Err(e),
    };
    Ok((lower.0, lower.1, upper.0, upper.1))
}

fn split(records: &[Record]) -> Result<ScoredSample> {
    let pos = records.iter().filter(|r| r.label == 1).map(Record::score).collect();
    let neg = records.iter().filter(|r| r.label == 0).map(Record::score).collect();
    ScoredSample::from_classes(pos, neg)
}

pub fn run_mixture(cfg: &MixtureConfig, execution: Execution) -> Result<Vec<MixtureRow>> {
    let mut g = rng::stream(cfg.seed, 0);
    let reference: Vec<Record> = (0..cfg.n_reference).map(|_| draw(true, cfg.label_noise, &mut g)).collect();
    let losses = EmpiricalSample::new(reference.iter().map(Record::loss).collect(), 1.0)?;
    let pairs = auc_pair_sample(&split(&reference)?, rng::derive_seed(cfg.seed, "pairs"))?;

    let rows = execution.map_indexed(cfg.gammas.len(), |i| -> Result<MixtureRow> {
        let gamma = cfg.gammas[i];
        let h = mixture_hellinger_disjoint(gamma)?;
        let rho = HellingerRadius::new(h)?;
        let composite = auc_composite_radius(rho);
        let mut g = rng::stream(cfg.seed, 1 + i as u64);
        let n = reference.len();
        let n_p = ((gamma * n as f64).round() as usize).min(n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut g);
        let mut mixed: Vec<Record> = order[..n_p].iter().map(|&j| reference[j]).collect();
        mixed.extend((n_p..n).map(|_| draw(false, cfg.label_noise, &mut g)));
        let errors = mixed.iter().filter(|r| r.loss() > 0.0).count();
        let loss = errors as f64 / mixed.len() as f64;
        let auc = auc_estimate(&split(&mixed)?);
        let (loss_lower, loss_lower_valid, loss_upper, loss_upper_valid) = band(&losses, rho, cfg.delta)?;
        let (auc_lower, auc_lower_valid, _, _) = band(&pairs, composite, cfg.delta)?;
        Ok(MixtureRow {
            gamma,
            hellinger: h,
            composite_radius: composite.value(),
            loss,
            loss_lower,
            loss_upper,
            auc,
            auc_lower,
            loss_lower_valid,
            loss_upper_valid,
            auc_lower_valid,
        })
    });
    rows.into_iter().collect()
}
