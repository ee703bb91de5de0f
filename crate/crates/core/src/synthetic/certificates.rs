//! Three upper certificates on the JSD risk of a network under a covariate
//! dislocation of norm `|delta|`: the Wasserstein dual certificate, the
//! Lipschitz certificate and the Hellinger certificate.

use serde::{Deserialize, Serialize};

use crate::bounds::{CertificateReport, HellingerRadius};
use crate::error::{CertError, Result};
use crate::exec::{compensated_mean, Execution};
use crate::sample::{corollary_upper_bound, ConfidenceBudget, EmpiricalSample};

use super::lipschitz::{lipschitz_profile, LipschitzProfile};
use super::network::SmallNetwork;
use super::task::{shift_distances, LabeledData};

/// How the transport budget relates to `|delta|` under the squared cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetConvention {
    /// `rho_W = |delta|^2`
    #[default]
    Squared,
    /// `rho_W = |delta|`
    Linear,
}

impl BudgetConvention {
    pub fn budget(self, norm_delta: f64) -> f64 {
        match self {
            BudgetConvention::Squared => norm_delta * norm_delta,
            BudgetConvention::Linear => norm_delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualConfig {
    pub grid_points: usize,
    /// The grid spans `[L*, span L*]` geometrically.
    pub grid_span: f64,
    pub max_steps: usize,
    pub gradient_tol: f64,
}

impl Default for DualConfig {
    fn default() -> Self {
        DualConfig { grid_points: 24, grid_span: 64.0, max_steps: 500, gradient_tol: 1e-6 }
    }
}

pub fn gamma_grid(l_star: f64, cfg: &DualConfig) -> Vec<f64> {
    let n = cfg.grid_points.max(1);
    if n == 1 {
        return vec![l_star];
    }
    (0..n).map(|i| l_star * cfg.grid_span.powf(i as f64 / (n - 1) as f64)).collect()
}

/// Maximizes `f(x) - gamma |x - x0|^2` by gradient ascent from `x0`, where
/// `f` returns its value and gradient. Returns the optimal value.
pub fn inner_maximize<F>(f: F, x0: [f64; 2], gamma: f64, step: f64, max_steps: usize, tol: f64) -> Result<f64>
where
    F: Fn(&[f64; 2]) -> (f64, [f64; 2]),
{
    let mut x = x0;
    for _ in 0..=max_steps {
        let (v, g) = f(&x);
        let d = [x[0] - x0[0], x[1] - x0[1]];
        let grad = [g[0] - 2.0 * gamma * d[0], g[1] - 2.0 * gamma * d[1]];
        if grad[0].hypot(grad[1]) < tol {
            return Ok(v - gamma * (d[0] * d[0] + d[1] * d[1]));
        }
        x = [x[0] + step * grad[0], x[1] + step * grad[1]];
    }
    Err(CertError::SolverDiagnostic(format!("inner ascent did not converge from {x0:?} at gamma = {gamma}")))
}

/// `E_P[phi_gamma]` over a grid of multipliers; the certificate at any budget
/// is then a minimum over this table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualProfile {
    pub l_star: f64,
    pub gammas: Vec<f64>,
    pub phi_means: Vec<f64>,
}

impl DualProfile {
    /// `min_gamma gamma rho_W + E[phi_gamma]`.
    pub fn certificate(&self, budget: f64) -> f64 {
        self.gammas.iter().zip(&self.phi_means).map(|(g, phi)| g * budget + phi).fold(f64::INFINITY, f64::min)
    }
}

pub fn dual_profile(
    net: &SmallNetwork,
    data: &LabeledData,
    cfg: &DualConfig,
    execution: Execution,
) -> Result<DualProfile> {
    let profile = lipschitz_profile(net);
    dual_profile_with(net, data, &profile, cfg, execution)
}

pub fn dual_profile_with(
    net: &SmallNetwork,
    data: &LabeledData,
    profile: &LipschitzProfile,
    cfg: &DualConfig,
    execution: Execution,
) -> Result<DualProfile> {
    let l_star = profile.l_star;
    if l_star.is_nan() || l_star <= 0.0 {
        return Err(CertError::Degenerate("curvature bound L* is zero".into()));
    }
    let gammas = gamma_grid(l_star, cfg);
    let mut phi_means = Vec::with_capacity(gammas.len());
    for &gamma in &gammas {
        // The objective is (L* + 2 gamma)-smooth, so 1/(L* + 2 gamma) is a safe step.
        let step = 1.0 / (l_star + 2.0 * gamma);
        let phis = execution.map_indexed(data.len(), |i| {
            let class = data.class[i];
            inner_maximize(
                |x| net.input_gradient(x, class),
                data.x[i],
                gamma,
                step,
                cfg.max_steps,
                cfg.gradient_tol,
            )
        });
        let phis: Vec<f64> = phis.into_iter().collect::<Result<_>>()?;
        phi_means.push(compensated_mean(&phis));
    }
    Ok(DualProfile { l_star, gammas, phi_means })
}

pub fn wasserstein_dual_certificate(
    net: &SmallNetwork,
    data: &LabeledData,
    shift_budget: f64,
    cfg: &DualConfig,
    execution: Execution,
) -> Result<f64> {
    Ok(dual_profile(net, data, cfg, execution)?.certificate(shift_budget))
}

/// `E_P[l] + l0 alpha_L |delta|`.
pub fn lipschitz_certificate(net: &SmallNetwork, data: &LabeledData, norm_delta: f64) -> f64 {
    net.mean_loss(data) + lipschitz_profile(net).loss_lipschitz() * norm_delta
}

/// Finite-sample Hellinger certificate on the unshifted sample at radius
/// `sqrt(1 - exp(-|delta|^2 / 8))`.
pub fn gramian_certificate_on_task(
    net: &SmallNetwork,
    data: &LabeledData,
    norm_delta: f64,
    budget: &ConfidenceBudget,
) -> Result<CertificateReport> {
    let sample = EmpiricalSample::new(net.losses(data), 1.0)?;
    let rho = HellingerRadius::new(shift_distances(norm_delta).1)?;
    corollary_upper_bound(&sample, rho, budget)
}
