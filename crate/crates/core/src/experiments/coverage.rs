//! Monte Carlo coverage of the finite-sample upper certificate against the
//! exact worst case of a known discrete distribution.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::HellingerRadius;
use crate::error::Result;
use crate::exec::Execution;
use crate::oracle::{worst_case_sup, DiscreteInstance};
use crate::rng;
use crate::sample::{corollary_upper_bound, ConfidenceBudget, EmpiricalSample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub trials: usize,
    pub n: usize,
    pub delta: f64,
    pub seed: u64,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        CoverageConfig { trials: 500, n: 200, delta: 0.05, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSummary {
    pub trials: usize,
    pub oracle_sup: f64,
    /// Trials whose certificate fell below the exact worst case.
    pub failures: usize,
    pub saturated: usize,
    pub mean_certificate: f64,
}

impl CoverageSummary {
    pub fn failure_rate(&self) -> f64 {
        self.failures as f64 / self.trials.max(1) as f64
    }
}

fn draw_index(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

pub fn run_coverage(
    instance: &DiscreteInstance,
    cfg: &CoverageConfig,
    execution: Execution,
) -> Result<CoverageSummary> {
    let oracle_sup = worst_case_sup(instance)?.value;
    let rho: HellingerRadius = instance.rho();
    let budget = ConfidenceBudget::two_way(cfg.delta)?;
    let results = execution.map_indexed(cfg.trials, |t| -> Result<(f64, bool)> {
        let mut g = rng::stream(cfg.seed, t as u64);
        let losses =
            (0..cfg.n).map(|_| instance.losses()[draw_index(instance.p().probs(), g.random())]).collect();
        let sample = EmpiricalSample::new(losses, instance.ceiling())?;
        let report = corollary_upper_bound(&sample, rho, &budget)?;
        Ok((report.bound, report.saturated))
    });
    let results: Vec<(f64, bool)> = results.into_iter().collect::<Result<_>>()?;
    Ok(CoverageSummary {
        trials: cfg.trials,
        oracle_sup,
        failures: results.iter().filter(|r| r.0 < oracle_sup).count(),
        saturated: results.iter().filter(|r| r.1).count(),
        mean_certificate: results.iter().map(|r| r.0).sum::<f64>() / results.len().max(1) as f64,
    })
}
