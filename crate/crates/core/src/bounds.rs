//! Population-level Gramian certificates.
//!
//! For a loss bounded by `M` with mean `E` and variance `V` under a reference
//! distribution `P`, every distribution `Q` within Hellinger distance `rho`
//! of `P` satisfies
//!
//! ```text
//! E_Q[l] <= E + 2 C_rho sqrt(V) + rho^2 (2 - rho^2) [M - E - V / (M - E)]
//! E_Q[l] >= E - 2 C_rho sqrt(V) - rho^2 (2 - rho^2) [E - V / E]
//! ```
//!
//! with `C_rho = sqrt(rho^2 (1 - rho^2)^2 (2 - rho^2))`, provided `rho` is
//! below the validity radius of the respective direction.

use serde::{Deserialize, Serialize};

use crate::error::{domain, CertError, Result};

/// Relative slack admitted when checking the Bhatia–Davis variance ceiling;
/// statistics computed from floating-point data can overshoot it by an ulp.
const VARIANCE_SLACK: f64 = 1e-12;

/// A Hellinger radius in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HellingerRadius(f64);

impl HellingerRadius {
    pub const ZERO: HellingerRadius = HellingerRadius(0.0);

    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(domain("rho", rho, "0 <= rho <= 1"));
        }
        Ok(HellingerRadius(rho))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `C_rho = sqrt(rho^2 (1 - rho^2)^2 (2 - rho^2))`.
    pub fn c_rho(self) -> f64 {
        let r2 = self.0 * self.0;
        (r2 * (2.0 - r2)).sqrt() * (1.0 - r2)
    }

    /// `rho^2 (2 - rho^2)`, the weight of the ceiling term. Equals
    /// `1 - (1 - rho^2)^2`, i.e. one minus the squared Hellinger affinity.
    pub fn shrinkage(self) -> f64 {
        let r2 = self.0 * self.0;
        r2 * (2.0 - r2)
    }
}

/// `C_rho` for a validated radius.
pub fn c_rho(rho: HellingerRadius) -> f64 {
    rho.c_rho()
}

/// Mean, variance and uniform ceiling of a bounded loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossStatistics {
    mean: f64,
    variance: f64,
    ceiling: f64,
}

impl LossStatistics {
    /// Rejects inputs that cannot come from a loss supported on `[0, M]`:
    /// the mean must lie in `[0, M]` and the variance must respect the
    /// Bhatia–Davis ceiling `E (M - E)`.
    pub fn new(mean: f64, variance: f64, ceiling: f64) -> Result<Self> {
        if !(ceiling > 0.0 && ceiling.is_finite()) {
            return Err(domain("ceiling", ceiling, "M > 0"));
        }
        if !(0.0..=ceiling).contains(&mean) {
            return Err(domain("mean", mean, "0 <= mean <= M"));
        }
        let max_var = mean * (ceiling - mean);
        if !(variance >= 0.0 && variance <= max_var + VARIANCE_SLACK * ceiling * ceiling) {
            return Err(domain("variance", variance, "0 <= variance <= mean (M - mean)"));
        }
        Ok(LossStatistics { mean, variance: variance.min(max_var), ceiling })
    }

    /// Exact statistics of `losses` under the probability vector `probs`.
    pub fn from_discrete(probs: &[f64], losses: &[f64], ceiling: f64) -> Result<Self> {
        if probs.len() != losses.len() {
            return Err(CertError::Degenerate(format!(
                "{} probabilities but {} losses",
                probs.len(),
                losses.len()
            )));
        }
        let mean: f64 = probs.iter().zip(losses).map(|(p, l)| p * l).sum();
        let mean = mean.clamp(0.0, ceiling);
        let variance: f64 = probs.iter().zip(losses).map(|(p, l)| p * (l - mean) * (l - mean)).sum();
        Self::new(mean, variance, ceiling)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn ceiling(&self) -> f64 {
        self.ceiling
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        })
    }
}

/// Summary of a finite sample as it entered a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub ceiling: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertificateInputs {
    Population(LossStatistics),
    Empirical(EmpiricalSummary),
}

impl CertificateInputs {
    pub fn mean(&self) -> f64 {
        match self {
            CertificateInputs::Population(s) => s.mean(),
            CertificateInputs::Empirical(s) => s.mean,
        }
    }

    pub fn ceiling(&self) -> f64 {
        match self {
            CertificateInputs::Population(s) => s.ceiling(),
            CertificateInputs::Empirical(s) => s.ceiling,
        }
    }
}

/// Outcome of a successful certification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub direction: Direction,
    pub radius: HellingerRadius,
    /// Certified value, clamped to `[0, M]`.
    pub bound: f64,
    /// The formula value before clamping.
    pub raw_bound: f64,
    pub max_valid_radius: f64,
    pub inputs: CertificateInputs,
    pub confidence: Option<f64>,
    /// Set when the trivial certificate (`M` for upper, `0` for lower) was
    /// returned because the statistics leave no room for a tighter one.
    #[serde(default)]
    pub saturated: bool,
}

/// `sqrt(1 - [1 + (gap / std)^2]^{-1/2})`: the largest radius for which the
/// Gram-determinant root ordering holds, given the distance `gap` of the
/// mean from the relevant end of the loss range and the standard deviation.
///
/// A zero standard deviation makes the condition vacuous (returns 1); a
/// non-positive gap leaves no certifiable radius (returns 0).
pub(crate) fn validity_radius(gap: f64, std: f64) -> f64 {
    if std <= 0.0 {
        return 1.0;
    }
    if gap <= 0.0 {
        return 0.0;
    }
    let r = gap / std;
    let x = (1.0 + r * r).sqrt();
    // 1 - 1/x, rearranged to avoid cancellation for small r
    let rho2 = r * r / ((x + 1.0) * x);
    rho2.clamp(0.0, 1.0).sqrt()
}

pub fn max_valid_radius_upper(stats: &LossStatistics) -> f64 {
    validity_radius(stats.ceiling - stats.mean, stats.variance.sqrt())
}

pub fn max_valid_radius_lower(stats: &LossStatistics) -> f64 {
    validity_radius(stats.mean, stats.variance.sqrt())
}

fn check_radius(rho: HellingerRadius, max_valid_radius: f64) -> Result<()> {
    if rho.value() > max_valid_radius {
        return Err(CertError::RadiusExceedsValidity { rho: rho.value(), max_valid_radius });
    }
    Ok(())
}

/// Raw upper formula; the `V / (M - E)` term vanishes when `V = 0`.
pub(crate) fn upper_formula(mean: f64, variance: f64, ceiling: f64, rho: HellingerRadius) -> f64 {
    let correction = if variance > 0.0 { variance / (ceiling - mean) } else { 0.0 };
    mean + 2.0 * rho.c_rho() * variance.sqrt() + rho.shrinkage() * (ceiling - mean - correction)
}

/// Raw lower formula; the `V / E` term vanishes when `V = 0`.
pub(crate) fn lower_formula(mean: f64, variance: f64, rho: HellingerRadius) -> f64 {
    let correction = if variance > 0.0 { variance / mean } else { 0.0 };
    mean - 2.0 * rho.c_rho() * variance.sqrt() - rho.shrinkage() * (mean - correction)
}

pub fn upper_bound(stats: &LossStatistics, rho: HellingerRadius) -> Result<CertificateReport> {
    let max_valid_radius = max_valid_radius_upper(stats);
    check_radius(rho, max_valid_radius)?;
    let raw = if rho.value() == 0.0 {
        stats.mean
    } else {
        upper_formula(stats.mean, stats.variance, stats.ceiling, rho)
    };
    Ok(CertificateReport {
        direction: Direction::Upper,
        radius: rho,
        bound: raw.min(stats.ceiling),
        raw_bound: raw,
        max_valid_radius,
        inputs: CertificateInputs::Population(*stats),
        confidence: None,
        saturated: false,
    })
}

pub fn lower_bound(stats: &LossStatistics, rho: HellingerRadius) -> Result<CertificateReport> {
    let max_valid_radius = max_valid_radius_lower(stats);
    check_radius(rho, max_valid_radius)?;
    let raw = if rho.value() == 0.0 { stats.mean } else { lower_formula(stats.mean, stats.variance, rho) };
    Ok(CertificateReport {
        direction: Direction::Lower,
        radius: rho,
        bound: raw.max(0.0),
        raw_bound: raw,
        max_valid_radius,
        inputs: CertificateInputs::Population(*stats),
        confidence: None,
        saturated: false,
    })
}

/// Worst-case classification error for a classifier with error rate
/// `error_rate` under `P`: the 0-1 loss has `E = eps`, `V = eps (1 - eps)`
/// and `M = 1`, which collapses the bracket to `1 - 2 eps`.
pub fn classification_error_upper(error_rate: f64, rho: HellingerRadius) -> Result<CertificateReport> {
    if !(0.0..=1.0).contains(&error_rate) {
        return Err(domain("error_rate", error_rate, "0 <= error_rate <= 1"));
    }
    let eps = error_rate;
    let stats = LossStatistics::new(eps, eps * (1.0 - eps), 1.0)?;
    // rho^2 <= 1 - sqrt(eps), except at eps = 1 where the variance vanishes
    // and the condition is vacuous.
    let max_valid_radius = max_valid_radius_upper(&stats);
    check_radius(rho, max_valid_radius)?;
    let raw = eps + 2.0 * rho.c_rho() * (eps * (1.0 - eps)).sqrt() + rho.shrinkage() * (1.0 - 2.0 * eps);
    Ok(CertificateReport {
        direction: Direction::Upper,
        radius: rho,
        bound: raw.clamp(0.0, 1.0),
        raw_bound: raw,
        max_valid_radius,
        inputs: CertificateInputs::Population(stats),
        confidence: None,
        saturated: false,
    })
}
