//! Loss and score functions with known ceilings: 0-1 loss, Jensen–Shannon
//! divergence to a one-hot target (base-2 logarithms, so `M = 1`) and the
//! AUC pair indicator.

use rand::seq::SliceRandom;

use crate::error::{domain, CertError, Result};
use crate::rng;
use crate::sample::EmpiricalSample;

/// Predicted and true labels of a classifier on a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionSample {
    records: Vec<(i64, i64)>,
}

impl PredictionSample {
    pub fn new(records: Vec<(i64, i64)>) -> Result<Self> {
        if records.is_empty() {
            return Err(CertError::Degenerate("prediction sample is empty".into()));
        }
        Ok(PredictionSample { records })
    }

    /// `(predicted, true)` pairs.
    pub fn records(&self) -> &[(i64, i64)] {
        &self.records
    }

    pub fn error_rate(&self) -> f64 {
        let wrong = self.records.iter().filter(|(p, y)| p != y).count();
        wrong as f64 / self.records.len() as f64
    }
}

/// Per-record 0-1 losses with ceiling 1.
pub fn zero_one_stats(sample: &PredictionSample) -> Result<EmpiricalSample> {
    let losses = sample.records.iter().map(|(p, y)| if p == y { 0.0 } else { 1.0 }).collect();
    EmpiricalSample::new(losses, 1.0)
}

fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// JSD between a predicted distribution and the one-hot target, written in
/// terms of the probability `p_y` assigned to the true class:
/// `1 + (p_y log2 p_y - (1 + p_y) log2 (1 + p_y)) / 2`.
pub fn jsd_loss(p_true: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_true) {
        return Err(domain("p_y", p_true, "0 <= p_y <= 1"));
    }
    let v = 1.0 + 0.5 * (xlog2x(p_true) - xlog2x(1.0 + p_true));
    Ok(v.clamp(0.0, 1.0))
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// JSD loss of `softmax(logits)` against `true_class`.
pub fn jsd_loss_logits(logits: &[f64], true_class: usize) -> f64 {
    let p = softmax(logits);
    jsd_loss(p[true_class]).expect("softmax output is a probability")
}

/// Gradient of [`jsd_loss_logits`] with respect to the logits:
/// `1/2 log2(p_y / (1 + p_y)) p_y (e_y - p)`.
pub fn jsd_gradient(logits: &[f64], true_class: usize) -> Vec<f64> {
    let p = softmax(logits);
    let py = p[true_class];
    if py == 0.0 {
        return vec![0.0; p.len()];
    }
    let scale = 0.5 * (py / (1.0 + py)).log2() * py;
    p.iter()
        .enumerate()
        .map(|(i, &pi)| {
            let e = if i == true_class { 1.0 } else { 0.0 };
            scale * (e - pi)
        })
        .collect()
}

/// Scores of a binary classifier with labels in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSample {
    positives: Vec<f64>,
    negatives: Vec<f64>,
}

impl ScoredSample {
    pub fn new(records: &[(f64, i8)]) -> Result<Self> {
        let mut positives = Vec::new();
        let mut negatives = Vec::new();
        for (i, &(score, label)) in records.iter().enumerate() {
            if !score.is_finite() {
                return Err(CertError::Degenerate(format!("score at record {i} is not finite")));
            }
            match label {
                1 => positives.push(score),
                -1 => negatives.push(score),
                other => {
                    return Err(CertError::Degenerate(format!(
                        "label {other} at record {i}; expected -1 or +1"
                    )))
                }
            }
        }
        Self::from_classes(positives, negatives)
    }

    pub fn from_classes(positives: Vec<f64>, negatives: Vec<f64>) -> Result<Self> {
        if positives.is_empty() || negatives.is_empty() {
            return Err(CertError::Degenerate(format!(
                "AUC needs both classes: {} positives, {} negatives",
                positives.len(),
                negatives.len()
            )));
        }
        Ok(ScoredSample { positives, negatives })
    }

    pub fn positives(&self) -> &[f64] {
        &self.positives
    }

    pub fn negatives(&self) -> &[f64] {
        &self.negatives
    }
}

/// Fraction of (positive, negative) pairs with `s+ >= s-`; ties count as
/// correctly ranked.
pub fn auc_estimate(sample: &ScoredSample) -> f64 {
    let mut neg = sample.negatives.clone();
    neg.sort_by(f64::total_cmp);
    let hits: usize = sample.positives.iter().map(|&s| neg.partition_point(|&x| x <= s)).sum();
    hits as f64 / (sample.positives.len() as f64 * neg.len() as f64)
}

/// Splits the sample into `min(n+, n-)` disjoint random (positive, negative)
/// pairs and returns the indicators `1{s+ >= s-}`. Pairs share no record, so
/// the indicators are i.i.d. and the finite-sample certificates apply.
pub fn auc_pair_sample(sample: &ScoredSample, seed: u64) -> Result<EmpiricalSample> {
    let mut rng = rng::stream(seed, 0);
    let mut pos = sample.positives.clone();
    let mut neg = sample.negatives.clone();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let indicators = pos.iter().zip(&neg).map(|(p, n)| if p >= n { 1.0 } else { 0.0 }).collect();
    EmpiricalSample::new(indicators, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::SampleStats;
    use proptest::prelude::*;

    fn brute_auc(pos: &[f64], neg: &[f64]) -> f64 {
        let mut hits = 0usize;
        for p in pos {
            for n in neg {
                if p >= n {
                    hits += 1;
                }
            }
        }
        hits as f64 / (pos.len() * neg.len()) as f64
    }

    #[test]
    fn zero_one_examples() {
        let all_right = PredictionSample::new(vec![(1, 1), (0, 0), (2, 2)]).unwrap();
        assert_eq!(zero_one_stats(&all_right).unwrap().mean(), 0.0);
        let all_wrong = PredictionSample::new(vec![(1, 0), (0, 1)]).unwrap();
        assert_eq!(zero_one_stats(&all_wrong).unwrap().mean(), 1.0);
        let mut recs = vec![(0, 0); 9];
        recs.push((1, 0));
        let s = zero_one_stats(&PredictionSample::new(recs).unwrap()).unwrap();
        assert!((s.mean() - 0.1).abs() < 1e-15);
        assert!((s.unbiased_variance() - 0.1).abs() < 1e-15);
        assert!(PredictionSample::new(vec![]).is_err());
    }

    #[test]
    fn jsd_examples() {
        assert_eq!(jsd_loss(1.0).unwrap(), 0.0);
        assert_eq!(jsd_loss(0.0).unwrap(), 1.0);
        assert!((jsd_loss(0.5).unwrap() - 0.311_278_124_459_132_9).abs() < 1e-14);
        assert!(jsd_loss(1.01).is_err());
        assert!(jsd_loss(-0.01).is_err());
    }

    #[test]
    fn jsd_gradient_examples() {
        let g = jsd_gradient(&[0.0, 60.0], 1);
        assert!(g.iter().all(|x| x.abs() < 1e-20));
        let g = jsd_gradient(&[0.0, 0.0], 0);
        let expect = 0.5 * (1.0f64 / 3.0).log2() * 0.5 * 0.5;
        assert!((g[0] - expect).abs() < 1e-15);
        assert!((g[1] + expect).abs() < 1e-15);
    }

    #[test]
    fn auc_examples() {
        let s = ScoredSample::from_classes(vec![0.9, 0.8], vec![0.1, 0.2]).unwrap();
        assert_eq!(auc_estimate(&s), 1.0);
        let s = ScoredSample::from_classes(vec![0.1, 0.2], vec![0.9, 0.8]).unwrap();
        assert_eq!(auc_estimate(&s), 0.0);
        let s = ScoredSample::from_classes(vec![0.9, 0.4], vec![0.5, 0.1]).unwrap();
        assert_eq!(auc_estimate(&s), 0.75);
        // ties count as hits
        let s = ScoredSample::from_classes(vec![0.5], vec![0.5]).unwrap();
        assert_eq!(auc_estimate(&s), 1.0);
        assert!(ScoredSample::new(&[(0.3, 1), (0.2, 1)]).is_err());
        assert!(ScoredSample::new(&[(0.3, 1), (0.2, 0)]).is_err());
    }

    #[test]
    fn pair_sample_examples() {
        let sep = ScoredSample::from_classes(vec![0.9, 0.8, 0.7], vec![0.1, 0.2, 0.3]).unwrap();
        let p = auc_pair_sample(&sep, 3).unwrap();
        assert!(p.losses().iter().all(|&l| l == 1.0));
        let one = ScoredSample::from_classes(vec![0.9], vec![0.1, 0.2]).unwrap();
        assert!(auc_pair_sample(&one, 0).is_err());

        // Both pairings of pos = (0.9, 0.4), neg = (0.5, 0.1) give mean 1 or 1/2.
        let s = ScoredSample::from_classes(vec![0.9, 0.4], vec![0.5, 0.1]).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..32 {
            let a = auc_pair_sample(&s, seed).unwrap();
            let b = auc_pair_sample(&s, seed).unwrap();
            assert_eq!(a, b);
            let m = a.mean();
            assert!(m == 0.5 || m == 1.0);
            seen.insert((m * 2.0) as u8);
        }
        assert_eq!(seen.len(), 2, "both pairings should occur across seeds");
    }

    proptest! {
        #[test]
        fn jsd_bounded_and_decreasing(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (fl, fh) = (jsd_loss(lo).unwrap(), jsd_loss(hi).unwrap());
            prop_assert!((0.0..=1.0).contains(&fl));
            prop_assert!(fh <= fl + 1e-15);
        }

        #[test]
        fn auc_matches_brute_force(
            pos in proptest::collection::vec(-3.0f64..3.0, 1..30),
            neg in proptest::collection::vec(-3.0f64..3.0, 1..30),
        ) {
            let s = ScoredSample::from_classes(pos.clone(), neg.clone()).unwrap();
            prop_assert_eq!(auc_estimate(&s), brute_auc(&pos, &neg));
        }

        #[test]
        fn auc_invariant_under_monotone_maps(
            pos in proptest::collection::vec(-3.0f64..3.0, 1..30),
            neg in proptest::collection::vec(-3.0f64..3.0, 1..30),
        ) {
            let f = |x: f64| (0.7 * x).exp() + 2.0 * x;
            let s = ScoredSample::from_classes(pos.clone(), neg.clone()).unwrap();
            let t = ScoredSample::from_classes(
                pos.iter().map(|&x| f(x)).collect(),
                neg.iter().map(|&x| f(x)).collect(),
            ).unwrap();
            prop_assert_eq!(auc_estimate(&s), auc_estimate(&t));
        }
    }
}
