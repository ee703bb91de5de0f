//! Finite-sample certificates.
//!
//! The population statistics of the loss are replaced by high-probability
//! bounds: Hoeffding's inequality for the mean and the Maurer–Pontil bound
//! for the standard deviation, combined through a union bound over the
//! confidence budget `delta`.

use serde::{Deserialize, Serialize};

use crate::bounds::{
    validity_radius, CertificateInputs, CertificateReport, Direction, EmpiricalSummary, HellingerRadius,
};
use crate::error::{domain, CertError, Result};

/// Read access to the moments a certificate needs.
pub trait SampleStats {
    fn n(&self) -> usize;
    fn mean(&self) -> f64;
    /// Unbiased (`n - 1`) sample variance.
    fn unbiased_variance(&self) -> f64;
    fn ceiling(&self) -> f64;
}

/// Single-pass Welford accumulator for losses in `[0, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamingMoments {
    ceiling: f64,
    n: usize,
    mean: f64,
    m2: f64,
}

impl StreamingMoments {
    pub fn new(ceiling: f64) -> Result<Self> {
        if !(ceiling > 0.0 && ceiling.is_finite()) {
            return Err(domain("ceiling", ceiling, "M > 0"));
        }
        Ok(StreamingMoments { ceiling, n: 0, mean: 0.0, m2: 0.0 })
    }

    /// Adds one loss; out-of-range values are rejected with their position.
    pub fn push(&mut self, loss: f64) -> Result<()> {
        if !(0.0..=self.ceiling).contains(&loss) {
            return Err(CertError::LossOutOfRange { index: self.n, value: loss, ceiling: self.ceiling });
        }
        self.n += 1;
        let d = loss - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (loss - self.mean);
        Ok(())
    }

    pub fn finish(self) -> Result<SampleMoments> {
        if self.n < 2 {
            return Err(CertError::Degenerate(format!(
                "need at least 2 losses for the unbiased variance, got {}",
                self.n
            )));
        }
        Ok(SampleMoments {
            n: self.n,
            mean: self.mean.clamp(0.0, self.ceiling),
            variance: (self.m2 / (self.n - 1) as f64).max(0.0),
            ceiling: self.ceiling,
        })
    }
}

/// Moments of a sample whose individual losses are no longer kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub ceiling: f64,
}

impl SampleStats for SampleMoments {
    fn n(&self) -> usize {
        self.n
    }
    fn mean(&self) -> f64 {
        self.mean
    }
    fn unbiased_variance(&self) -> f64 {
        self.variance
    }
    fn ceiling(&self) -> f64 {
        self.ceiling
    }
}

/// A finite loss sample with its empirical mean and unbiased variance.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    losses: Vec<f64>,
    moments: SampleMoments,
}

impl EmpiricalSample {
    pub fn new(losses: Vec<f64>, ceiling: f64) -> Result<Self> {
        let mut acc = StreamingMoments::new(ceiling)?;
        for &l in &losses {
            acc.push(l)?;
        }
        Ok(EmpiricalSample { moments: acc.finish()?, losses })
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn moments(&self) -> SampleMoments {
        self.moments
    }
}

impl SampleStats for EmpiricalSample {
    fn n(&self) -> usize {
        self.moments.n
    }
    fn mean(&self) -> f64 {
        self.moments.mean
    }
    fn unbiased_variance(&self) -> f64 {
        self.moments.variance
    }
    fn ceiling(&self) -> f64 {
        self.moments.ceiling
    }
}

/// How `delta` is divided among the concentration events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetSplit {
    /// Upper mean bound and upper standard-deviation bound, `delta / 2` each.
    TwoWay,
    /// Lower and upper mean bounds plus the standard-deviation bound,
    /// `delta / 3` each.
    ThreeWay,
}

impl BudgetSplit {
    fn parts(self) -> f64 {
        match self {
            BudgetSplit::TwoWay => 2.0,
            BudgetSplit::ThreeWay => 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBudget {
    delta: f64,
    split: BudgetSplit,
}

impl ConfidenceBudget {
    pub fn new(delta: f64, split: BudgetSplit) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(domain("delta", delta, "0 < delta < 1"));
        }
        Ok(ConfidenceBudget { delta, split })
    }

    pub fn two_way(delta: f64) -> Result<Self> {
        Self::new(delta, BudgetSplit::TwoWay)
    }

    pub fn three_way(delta: f64) -> Result<Self> {
        Self::new(delta, BudgetSplit::ThreeWay)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn split(&self) -> BudgetSplit {
        self.split
    }

    /// Share of `delta` given to each concentration event.
    pub fn part(&self) -> f64 {
        self.delta / self.split.parts()
    }

    fn require(&self, split: BudgetSplit) -> Result<()> {
        if self.split != split {
            return Err(CertError::Degenerate(format!(
                "certificate needs a {split:?} budget, got {:?}",
                self.split
            )));
        }
        Ok(())
    }
}

fn check_delta_part(delta_part: f64) -> Result<()> {
    if !(delta_part > 0.0 && delta_part <= 1.0) {
        return Err(domain("delta_part", delta_part, "0 < delta_part <= 1"));
    }
    Ok(())
}

fn hoeffding_slack<S: SampleStats + ?Sized>(sample: &S, delta_part: f64) -> f64 {
    sample.ceiling() * ((1.0 / delta_part).ln() / (2.0 * sample.n() as f64)).sqrt()
}

/// `L_n + M sqrt(ln(1/delta) / (2n))`.
pub fn hoeffding_mean_upper<S: SampleStats + ?Sized>(sample: &S, delta_part: f64) -> Result<f64> {
    check_delta_part(delta_part)?;
    Ok(sample.mean() + hoeffding_slack(sample, delta_part))
}

/// `L_n - M sqrt(ln(1/delta) / (2n))`, floored at zero.
pub fn hoeffding_mean_lower<S: SampleStats + ?Sized>(sample: &S, delta_part: f64) -> Result<f64> {
    check_delta_part(delta_part)?;
    Ok((sample.mean() - hoeffding_slack(sample, delta_part)).max(0.0))
}

/// `sqrt(S_n^2) + M sqrt(2 ln(1/delta) / (n - 1))`.
pub fn maurer_pontil_std_upper<S: SampleStats + ?Sized>(sample: &S, delta_part: f64) -> Result<f64> {
    check_delta_part(delta_part)?;
    let n = sample.n() as f64;
    Ok(sample.unbiased_variance().sqrt()
        + sample.ceiling() * (2.0 * (1.0 / delta_part).ln() / (n - 1.0)).sqrt())
}

/// Terms shared by the upper certificate and its validity radius.
struct UpperTerms {
    /// `L_n - M (1 - sqrt(ln(2/delta) / (2n)))`; equals minus the gap
    /// between the ceiling and the Hoeffding upper mean bound.
    denominator: f64,
    /// Maurer–Pontil standard-deviation bound at `delta / 2`.
    std_upper: f64,
}

fn upper_terms<S: SampleStats + ?Sized>(sample: &S, delta: f64) -> UpperTerms {
    let m = sample.ceiling();
    let n = sample.n() as f64;
    let ln_term = (2.0 / delta).ln();
    UpperTerms {
        denominator: sample.mean() - m * (1.0 - (ln_term / (2.0 * n)).sqrt()),
        std_upper: sample.unbiased_variance().sqrt() + m * (2.0 * ln_term / (n - 1.0)).sqrt(),
    }
}

/// Largest radius admitted by the finite-sample upper certificate.
///
/// Uses `ln(2/delta)` in both the mean and the standard-deviation slack.
/// Returns 0 when the Hoeffding upper mean bound already reaches the
/// ceiling.
pub fn max_valid_radius_empirical<S: SampleStats + ?Sized>(sample: &S, budget: &ConfidenceBudget) -> f64 {
    let t = upper_terms(sample, budget.delta());
    validity_radius(-t.denominator, t.std_upper)
}

/// Largest radius admitted by [`corollary_lower_bound`]: the lower-bound
/// validity condition evaluated at the Hoeffding lower mean bound and the
/// Maurer–Pontil standard-deviation bound, each at `delta / 3`.
pub fn max_valid_radius_empirical_lower<S: SampleStats + ?Sized>(
    sample: &S,
    budget: &ConfidenceBudget,
) -> Result<f64> {
    let part = budget.delta() / 3.0;
    let mean_lo = hoeffding_mean_lower(sample, part)?;
    let std_hi = maurer_pontil_std_upper(sample, part)?;
    Ok(validity_radius(mean_lo, std_hi))
}

fn summary<S: SampleStats + ?Sized>(sample: &S, budget: &ConfidenceBudget) -> CertificateInputs {
    CertificateInputs::Empirical(EmpiricalSummary {
        n: sample.n(),
        mean: sample.mean(),
        variance: sample.unbiased_variance(),
        ceiling: sample.ceiling(),
        delta: budget.delta(),
    })
}

/// High-probability upper certificate on the worst-case risk.
///
/// With probability at least `1 - delta` over the sample,
///
/// ```text
/// sup E_Q[l] <= L + 2 C sqrt(S2) + Delta
///             + k [M - L + (S2 + 2M sqrt(2 S2 ln(2/d)/(n-1)) + 2M^2 ln(2/d)/(n-1))
///                          / (L - M (1 - sqrt(ln(2/d)/(2n))))]
/// Delta = (2C / sqrt(n-1) - k / (2 sqrt(n))) M sqrt(2 ln(2/d))
/// ```
///
/// where `k = rho^2 (2 - rho^2)`. When the Hoeffding upper mean bound
/// reaches the ceiling the only certificate left is `M` itself; it is
/// returned with `saturated` set.
pub fn corollary_upper_bound<S: SampleStats + ?Sized>(
    sample: &S,
    rho: HellingerRadius,
    budget: &ConfidenceBudget,
) -> Result<CertificateReport> {
    budget.require(BudgetSplit::TwoWay)?;
    let m = sample.ceiling();
    let l = sample.mean();
    let s2 = sample.unbiased_variance();
    let n = sample.n() as f64;
    let delta = budget.delta();
    let inputs = summary(sample, budget);
    let confidence = Some(1.0 - delta);

    if rho.value() == 0.0 {
        return Ok(CertificateReport {
            direction: Direction::Upper,
            radius: rho,
            bound: l,
            raw_bound: l,
            max_valid_radius: max_valid_radius_empirical(sample, budget),
            inputs,
            confidence,
            saturated: false,
        });
    }

    let terms = upper_terms(sample, delta);
    if terms.denominator >= 0.0 {
        return Ok(CertificateReport {
            direction: Direction::Upper,
            radius: rho,
            bound: m,
            raw_bound: m,
            max_valid_radius: 1.0,
            inputs,
            confidence,
            saturated: true,
        });
    }
    let max_valid_radius = validity_radius(-terms.denominator, terms.std_upper);
    if rho.value() > max_valid_radius {
        return Err(CertError::RadiusExceedsValidity { rho: rho.value(), max_valid_radius });
    }

    let ln_term = (2.0 / delta).ln();
    let c = rho.c_rho();
    let k = rho.shrinkage();
    let slack = (c * 2.0 / (n - 1.0).sqrt() - k / (2.0 * n.sqrt())) * m * (2.0 * ln_term).sqrt();
    let numerator =
        s2 + 2.0 * m * (2.0 * s2 * ln_term / (n - 1.0)).sqrt() + 2.0 * m * m * ln_term / (n - 1.0);
    let raw = l + 2.0 * c * s2.sqrt() + slack + k * (m - l + numerator / terms.denominator);

    Ok(CertificateReport {
        direction: Direction::Upper,
        radius: rho,
        bound: raw.clamp(0.0, m),
        raw_bound: raw,
        max_valid_radius,
        inputs,
        confidence,
        saturated: false,
    })
}

/// High-probability lower certificate on the best-case risk.
///
/// Evaluates `E_lo - 2 C sigma_hi - k E_hi`, where `E_lo`/`E_hi` are the
/// Hoeffding lower/upper mean bounds and `sigma_hi` the Maurer–Pontil
/// bound, each at `delta / 3`. Compared with the population lower bound the
/// `+ k V / E` term is dropped, which only lowers the value.
pub fn corollary_lower_bound<S: SampleStats + ?Sized>(
    sample: &S,
    rho: HellingerRadius,
    budget: &ConfidenceBudget,
) -> Result<CertificateReport> {
    budget.require(BudgetSplit::ThreeWay)?;
    let part = budget.part();
    let mean_lo = hoeffding_mean_lower(sample, part)?;
    let mean_hi = hoeffding_mean_upper(sample, part)?;
    let std_hi = maurer_pontil_std_upper(sample, part)?;
    let max_valid_radius = validity_radius(mean_lo, std_hi);
    if rho.value() > max_valid_radius {
        return Err(CertError::RadiusExceedsValidity { rho: rho.value(), max_valid_radius });
    }
    let raw = mean_lo - 2.0 * rho.c_rho() * std_hi - rho.shrinkage() * mean_hi;
    Ok(CertificateReport {
        direction: Direction::Lower,
        radius: rho,
        bound: raw.clamp(0.0, sample.ceiling()),
        raw_bound: raw,
        max_valid_radius,
        inputs: summary(sample, budget),
        confidence: Some(1.0 - budget.delta()),
        saturated: false,
    })
}
