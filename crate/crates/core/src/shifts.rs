//! Hellinger radii for specific shift models.

use serde::{Deserialize, Serialize};

use crate::bounds::HellingerRadius;
use crate::error::{domain, CertError, Result};

/// A probability vector on a finite support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Normalizes `weights` to sum to one. Entries must be finite and
    /// non-negative with a positive total.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CertError::Degenerate("empty probability vector".into()));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(domain("probability", w, "finite and >= 0"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(CertError::Degenerate("probability vector sums to zero".into()));
        }
        Ok(DiscreteDistribution { probs: weights.into_iter().map(|w| w / total).collect() })
    }

    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        let mut w = vec![0.0; len];
        *w.get_mut(index)
            .ok_or_else(|| CertError::Degenerate(format!("index {index} outside support {len}")))? = 1.0;
        Self::new(w)
    }

    pub fn uniform(len: usize) -> Result<Self> {
        Self::new(vec![1.0; len])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Square-root density on the counting measure.
    pub fn sqrt_density(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.sqrt()).collect()
    }

    /// Zero-extended copy on a support of size `len`.
    pub fn padded(&self, len: usize) -> DiscreteDistribution {
        let mut probs = self.probs.clone();
        if probs.len() < len {
            probs.resize(len, 0.0);
        }
        DiscreteDistribution { probs }
    }

    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }
}

impl TryFrom<Vec<f64>> for DiscreteDistribution {
    type Error = CertError;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<DiscreteDistribution> for Vec<f64> {
    fn from(value: DiscreteDistribution) -> Self {
        value.probs
    }
}

fn sqrt_diffs<'a>(
    p: &'a DiscreteDistribution,
    q: &'a DiscreteDistribution,
) -> impl Iterator<Item = f64> + 'a {
    let len = p.len().max(q.len());
    (0..len).map(move |i| {
        let a = p.probs.get(i).copied().unwrap_or(0.0).sqrt();
        let b = q.probs.get(i).copied().unwrap_or(0.0).sqrt();
        a - b
    })
}

/// `H(p, q) = sqrt(1/2 sum (sqrt p_i - sqrt q_i)^2)`; shorter vectors are
/// zero-padded.
pub fn discrete_hellinger(p: &DiscreteDistribution, q: &DiscreteDistribution) -> f64 {
    let half_sq: f64 = 0.5 * sqrt_diffs(p, q).map(|d| d * d).sum::<f64>();
    half_sq.sqrt().min(1.0)
}

/// Hellinger distance between two joint distributions that share their
/// class-conditional covariate distributions: `||sqrt p - sqrt q||_2 / sqrt 2`
/// over the label marginals.
pub fn label_shift_hellinger(p: &DiscreteDistribution, q: &DiscreteDistribution) -> f64 {
    let norm = sqrt_diffs(p, q).map(|d| d * d).sum::<f64>().sqrt();
    (norm * std::f64::consts::FRAC_1_SQRT_2).min(1.0)
}

/// Distance between `P` and `gamma P + (1 - gamma) Q` for `Q` with support
/// disjoint from `P`: `sqrt(1 - sqrt(gamma))`.
pub fn mixture_hellinger_disjoint(mixture_gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mixture_gamma) {
        return Err(domain("mixture_gamma", mixture_gamma, "0 <= gamma <= 1"));
    }
    Ok((1.0 - mixture_gamma.sqrt()).max(0.0).sqrt())
}

/// Radius on the pair distribution `(X+, X-)` when each class-conditional
/// covariate distribution moves by at most `rho`: `sqrt(rho^2 (2 - rho^2))`.
pub fn auc_composite_radius(rho: HellingerRadius) -> HellingerRadius {
    HellingerRadius::new(rho.shrinkage().clamp(0.0, 1.0).sqrt()).expect("composite radius lies in [0, 1]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn construction_normalizes_and_rejects() {
        let p = d(&[2.0, 6.0]);
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert!(DiscreteDistribution::new(vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![0.0, 0.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, -0.1]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, f64::INFINITY]).is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[0.25,0.75]");
        assert!(serde_json::from_str::<DiscreteDistribution>("[0,0]").is_err());
    }

    #[test]
    fn hellinger_examples() {
        let p = d(&[0.3, 0.7]);
        assert_eq!(discrete_hellinger(&p, &p), 0.0);
        assert_eq!(discrete_hellinger(&d(&[1.0, 0.0]), &d(&[0.0, 1.0])), 1.0);
        let h = discrete_hellinger(&d(&[0.5, 0.5]), &d(&[1.0, 0.0]));
        assert!((h - 0.541_196_100_146_197).abs() < 1e-12);
        let g = label_shift_hellinger(&d(&[0.5, 0.5]), &d(&[1.0, 0.0]));
        assert!((g - 0.541_196_100_146_197).abs() < 1e-12);
        assert_eq!(label_shift_hellinger(&d(&[1.0, 0.0]), &d(&[0.0, 1.0])), 1.0);
        // padding: a new class that P never saw
        let h = discrete_hellinger(&d(&[1.0]), &d(&[0.0, 1.0]));
        assert_eq!(h, 1.0);
    }

    #[test]
    fn mixture_examples() {
        assert_eq!(mixture_hellinger_disjoint(1.0).unwrap(), 0.0);
        assert_eq!(mixture_hellinger_disjoint(0.0).unwrap(), 1.0);
        let h = mixture_hellinger_disjoint(0.25).unwrap();
        assert!((h - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(mixture_hellinger_disjoint(1.1).is_err());
        // cross-check on explicit disjoint supports
        let p = [0.2, 0.5, 0.3, 0.0, 0.0];
        let q = [0.0, 0.0, 0.0, 0.6, 0.4];
        for gamma in [0.05, 0.25, 0.5, 0.9] {
            let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| gamma * a + (1.0 - gamma) * b).collect();
            let h = discrete_hellinger(&d(&p), &d(&mix));
            assert!((h - mixture_hellinger_disjoint(gamma).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn composite_radius_examples() {
        let c = |x: f64| auc_composite_radius(HellingerRadius::new(x).unwrap()).value();
        assert_eq!(c(0.0), 0.0);
        assert_eq!(c(1.0), 1.0);
        assert!((c(0.3) - 0.414_608_248_832_557_6).abs() < 1e-12);
    }

    fn dist(k: usize) -> impl Strategy<Value = DiscreteDistribution> {
        proptest::collection::vec(0.0f64..1.0, k)
            .prop_filter("positive mass", |w| w.iter().sum::<f64>() > 1e-6)
            .prop_map(|w| DiscreteDistribution::new(w).unwrap())
    }

    proptest! {
        #[test]
        fn hellinger_is_a_metric((p, q, r) in (dist(5), dist(5), dist(5))) {
            let pq = discrete_hellinger(&p, &q);
            prop_assert_eq!(pq, discrete_hellinger(&q, &p));
            prop_assert!(discrete_hellinger(&p, &p) < 1e-12);
            prop_assert!((0.0..=1.0).contains(&pq));
            prop_assert!(pq <= discrete_hellinger(&p, &r) + discrete_hellinger(&r, &q) + 1e-12);
            prop_assert!((pq - label_shift_hellinger(&p, &q)).abs() < 1e-14);
        }
    }
}
