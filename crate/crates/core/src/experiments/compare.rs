//! Sweep over architectures and dislocation sizes comparing the Hellinger
//! certificate with the Wasserstein dual and Lipschitz certificates.

use serde::{Deserialize, Serialize};

use crate::error::{CertError, Result};
use crate::exec::Execution;
use crate::rng;
use crate::sample::ConfidenceBudget;
use crate::synthetic::{
    dual_profile, gramian_certificate_on_task, lipschitz_profile, sample_task, shift_distances,
    train_network, BudgetConvention, DualConfig, GaussianMixtureTask, SmallNetwork, TrainingConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub widths: Vec<usize>,
    pub depths: Vec<usize>,
    pub norm_deltas: Vec<f64>,
    /// Dislocation direction; normalized before use.
    pub direction: [f64; 2],
    pub seed: u64,
    pub n_train: usize,
    pub n_eval: usize,
    pub confidence_delta: f64,
    pub training: TrainingConfig,
    pub dual: DualConfig,
    pub budget_convention: BudgetConvention,
}

pub fn default_delta_grid() -> Vec<f64> {
    let mut grid = vec![0.01, 0.05];
    grid.extend((1..=30).map(|i| i as f64 / 10.0));
    grid
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            widths: vec![16],
            depths: vec![2],
            norm_deltas: default_delta_grid(),
            direction: [1.0, 0.0],
            seed: 0,
            n_train: 2000,
            n_eval: 2000,
            confidence_delta: 0.01,
            training: TrainingConfig::default(),
            dual: DualConfig::default(),
            budget_convention: BudgetConvention::Squared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub norm_delta: f64,
    pub hellinger: f64,
    pub wasserstein: f64,
    pub empirical_loss_shifted: f64,
    pub gramian_cert: f64,
    pub dual_cert: f64,
    pub lipschitz_cert: f64,
    pub width: usize,
    pub depth: usize,
    pub seed: u64,
    /// False when the radius exceeded the validity radius and the trivial
    /// certificate `1` was reported instead.
    pub gramian_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureSummary {
    pub width: usize,
    pub depth: usize,
    pub empirical_loss: f64,
    pub training_error: f64,
    pub l_star: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOutcome {
    pub rows: Vec<CompareRow>,
    pub architectures: Vec<ArchitectureSummary>,
}

fn unit(d: [f64; 2]) -> Result<[f64; 2]> {
    let n = d[0].hypot(d[1]);
    if !(n > 0.0 && n.is_finite()) {
        return Err(CertError::Degenerate("dislocation direction must be non-zero".into()));
    }
    Ok([d[0] / n, d[1] / n])
}

pub fn run_compare(cfg: &CompareConfig, execution: Execution) -> Result<CompareOutcome> {
    let dir = unit(cfg.direction)?;
    let task = GaussianMixtureTask {
        n_train: cfg.n_train,
        n_eval: cfg.n_eval,
        seed: cfg.seed,
        ..Default::default()
    };
    let data = sample_task(&task);
    let budget = ConfidenceBudget::two_way(cfg.confidence_delta)?;
    let mut rows = Vec::new();
    let mut architectures = Vec::new();
    for &depth in &cfg.depths {
        for &width in &cfg.widths {
            let label = format!("net-{width}x{depth}");
            let init = SmallNetwork::new(&vec![width; depth], rng::derive_seed(cfg.seed, &label))?;
            let training = TrainingConfig {
                seed: rng::derive_seed(cfg.seed, &format!("train-{width}x{depth}")),
                ..cfg.training
            };
            let net = train_network(init, &data.train, &training)?;
            let profile = lipschitz_profile(&net);
            let dual = dual_profile(&net, &data.eval, &cfg.dual, execution)?;
            let empirical_loss = net.mean_loss(&data.eval);
            architectures.push(ArchitectureSummary {
                width,
                depth,
                empirical_loss,
                training_error: net.error_rate(&data.train),
                l_star: profile.l_star,
                alpha: profile.alpha_out(),
            });
            let slope = profile.loss_lipschitz();
            for &nd in &cfg.norm_deltas {
                let (wasserstein, hellinger) = shift_distances(nd);
                let shifted = data.eval.shifted([nd * dir[0], nd * dir[1]]);
                let (gramian_cert, gramian_valid) =
                    match gramian_certificate_on_task(&net, &data.eval, nd, &budget) {
                        Ok(r) => (r.bound, true),
                        Err(CertError::RadiusExceedsValidity { .. }) => (1.0, false),
                        Err(e) => return Err(e),
                    };
                rows.push(CompareRow {
                    norm_delta: nd,
                    hellinger,
                    wasserstein,
                    empirical_loss_shifted: net.mean_loss(&shifted),
                    gramian_cert,
                    dual_cert: dual.certificate(cfg.budget_convention.budget(nd)),
                    lipschitz_cert: empirical_loss + slope * nd,
                    width,
                    depth,
                    seed: cfg.seed,
                    gramian_valid,
                });
            }
        }
    }
    Ok(CompareOutcome { rows, architectures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep() {
        let cfg = CompareConfig {
            widths: vec![4],
            depths: vec![1],
            norm_deltas: vec![0.01, 0.5, 1.0],
            n_train: 400,
            n_eval: 300,
            training: TrainingConfig { steps: 300, ..Default::default() },
            dual: DualConfig { grid_points: 8, ..Default::default() },
            ..Default::default()
        };
        let out = run_compare(&cfg, Execution::default()).unwrap();
        assert_eq!(out.rows.len(), 3);
        let first = out.rows[0];
        let loss = out.architectures[0].empirical_loss;
        for c in [first.gramian_cert, first.dual_cert, first.lipschitz_cert] {
            assert!((c - loss).abs() < 0.02);
        }
        assert!(out.rows.windows(2).all(|w| w[1].dual_cert >= w[0].dual_cert));
        assert_eq!(out, run_compare(&cfg, Execution::Sequential).unwrap());
        let bad = CompareConfig { direction: [0.0, 0.0], ..cfg };
        assert!(run_compare(&bad, Execution::Sequential).is_err());
    }
}
