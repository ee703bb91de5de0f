use gramcert::bounds::{
    classification_error_upper, lower_bound, max_valid_radius_lower, max_valid_radius_upper, upper_bound,
};
use gramcert::losses::{auc_estimate, jsd_gradient, jsd_loss, jsd_loss_logits, ScoredSample};
use gramcert::oracle::{gram_determinant, worst_case_inf, worst_case_sup, DiscreteInstance};
use gramcert::sample::{
    corollary_lower_bound, corollary_upper_bound, ConfidenceBudget, EmpiricalSample, SampleStats,
};
use gramcert::shifts::{discrete_hellinger, label_shift_hellinger, DiscreteDistribution};
use gramcert::{Direction, HellingerRadius, LossStatistics};
use proptest::prelude::*;

fn weights(k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(prop_oneof![1 => Just(0.0), 5 => 1e-3..1.0f64], k)
        .prop_filter("positive mass", |w| w.iter().any(|&x| x > 0.0))
}

fn stats() -> impl Strategy<Value = LossStatistics> {
    (0.1..10.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(m, a, b)| {
        let e = m * a;
        LossStatistics::new(e, e * (m - e) * b, m).unwrap()
    })
}

fn instance() -> impl Strategy<Value = (DiscreteInstance, f64, f64)> {
    weights(1..=8)
        .prop_flat_map(|w| {
            let k = w.len();
            (Just(w), proptest::collection::vec(0.0..=1.0f64, k), 0.0..=1.0f64, 0.0..=1.0f64)
        })
        .prop_map(|(w, losses, a, b)| {
            let p = DiscreteDistribution::new(w).unwrap();
            (DiscreteInstance::new(p, losses, 1.0, HellingerRadius::ZERO).unwrap(), a, b)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn certificates_bracket_the_mean(s in stats(), t in 0.0..=1.0f64) {
        let rho = HellingerRadius::new(t * max_valid_radius_upper(&s)).unwrap();
        let up = upper_bound(&s, rho).unwrap();
        prop_assert!(up.bound >= s.mean());
        prop_assert!(up.radius.value() <= up.max_valid_radius);
        prop_assert_eq!(up.direction, Direction::Upper);
        let rho = HellingerRadius::new(t * max_valid_radius_lower(&s)).unwrap();
        let lo = lower_bound(&s, rho).unwrap();
        prop_assert!(lo.bound <= s.mean());
        prop_assert!(lo.radius.value() <= lo.max_valid_radius);
    }

    #[test]
    fn radius_beyond_validity_is_rejected(s in stats()) {
        let limit = max_valid_radius_upper(&s);
        prop_assume!(limit < 0.999);
        let rho = HellingerRadius::new((limit + 1e-3).min(1.0)).unwrap();
        prop_assert!(upper_bound(&s, rho).is_err());
    }

    #[test]
    fn oracle_is_dominated((inst, a, b) in instance()) {
        let s = inst.stats().unwrap();
        let rho_u = HellingerRadius::new(a * max_valid_radius_upper(&s)).unwrap();
        let sup = worst_case_sup(&inst.with_rho(rho_u)).unwrap();
        prop_assert!(upper_bound(&s, rho_u).unwrap().bound >= sup.value - 1e-9);
        let q = &sup.maximizer;
        prop_assert!((q.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(discrete_hellinger(inst.p(), q) <= rho_u.value() + 1e-9);
        prop_assert!((q.expectation(inst.losses()) - sup.value).abs() < 1e-12);

        let rho_l = HellingerRadius::new(b * max_valid_radius_lower(&s)).unwrap();
        let inf = worst_case_inf(&inst.with_rho(rho_l)).unwrap();
        prop_assert!(lower_bound(&s, rho_l).unwrap().bound <= inf.value + 1e-9);
    }

    #[test]
    fn oracle_sup_grows_with_radius((inst, a, b) in instance()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let at = |r: f64| worst_case_sup(&inst.with_rho(HellingerRadius::new(r).unwrap())).unwrap().value;
        prop_assert!(at(hi) >= at(lo) - 1e-9);
    }

    #[test]
    fn error_certificate_is_the_bernoulli_case(eps in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        let s = LossStatistics::new(eps, eps * (1.0 - eps), 1.0).unwrap();
        let rho = HellingerRadius::new(t * max_valid_radius_upper(&s)).unwrap();
        let a = classification_error_upper(eps, rho).unwrap().bound;
        let b = upper_bound(&s, rho).unwrap().bound;
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn corollary_is_conservative_at_zero_radius(
        x in proptest::collection::vec(0.0..=1.0f64, 2..200),
        delta in 0.001..0.5f64,
    ) {
        let s = EmpiricalSample::new(x, 1.0).unwrap();
        let up = corollary_upper_bound(&s, HellingerRadius::ZERO, &ConfidenceBudget::two_way(delta).unwrap());
        if let Ok(r) = up {
            prop_assert!(r.bound >= s.mean());
        }
        let lo = corollary_lower_bound(&s, HellingerRadius::ZERO, &ConfidenceBudget::three_way(delta).unwrap());
        if let Ok(r) = lo {
            prop_assert!(r.bound <= s.mean());
        }
    }

    #[test]
    fn hellinger_is_a_metric(
        w in proptest::collection::vec((1e-3..1.0f64, 1e-3..1.0f64, 0.0..1.0f64), 1..10),
    ) {
        let p = DiscreteDistribution::new(w.iter().map(|t| t.0).collect()).unwrap();
        let q = DiscreteDistribution::new(w.iter().map(|t| t.1).collect()).unwrap();
        let r = DiscreteDistribution::new(w.iter().map(|t| t.2 + 1e-9).collect()).unwrap();
        let d = discrete_hellinger;
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &p) < 1e-12);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-12);
        prop_assert!((0.0..=1.0).contains(&d(&p, &q)));
        prop_assert!((label_shift_hellinger(&p, &q) - d(&p, &q)).abs() <= 1e-14);
    }

    #[test]
    fn gram_matrix_is_psd(
        w in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..10.0f64), 1..10),
    ) {
        let p = DiscreteDistribution::new(w.iter().map(|t| t.0 + 1e-6).collect()).unwrap();
        let q = DiscreteDistribution::new(w.iter().map(|t| t.1 + 1e-6).collect()).unwrap();
        let f: Vec<f64> = w.iter().map(|t| t.2).collect();
        prop_assert!(gram_determinant(&p, &q, &f) >= -1e-12);
    }

    #[test]
    fn jsd_gradient_matches_finite_differences(
        logits in proptest::collection::vec(-4.0..4.0f64, 2..8),
        pick in 0usize..8,
    ) {
        let y = pick % logits.len();
        let g = jsd_gradient(&logits, y);
        let h = 1e-5;
        for i in 0..logits.len() {
            let (mut a, mut b) = (logits.clone(), logits.clone());
            a[i] += h;
            b[i] -= h;
            let fd = (jsd_loss_logits(&a, y) - jsd_loss_logits(&b, y)) / (2.0 * h);
            prop_assert!((g[i] - fd).abs() <= 1e-7 * (1.0 + g[i].abs()));
        }
    }

    #[test]
    fn jsd_loss_is_bounded_and_decreasing(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (la, lb) = (jsd_loss(a).unwrap(), jsd_loss(b).unwrap());
        prop_assert!((0.0..=1.0).contains(&la));
        if a <= b {
            prop_assert!(la >= lb);
        }
    }

    #[test]
    fn auc_ignores_monotone_rescaling(
        pos in proptest::collection::vec(-3.0..3.0f64, 1..40),
        neg in proptest::collection::vec(-3.0..3.0f64, 1..40),
    ) {
        let s = ScoredSample::from_classes(pos.clone(), neg.clone()).unwrap();
        let t = |v: &Vec<f64>| v.iter().map(|x| (2.0 * x).exp() + 1.0).collect::<Vec<_>>();
        let s2 = ScoredSample::from_classes(t(&pos), t(&neg)).unwrap();
        prop_assert_eq!(auc_estimate(&s), auc_estimate(&s2));
    }
}

#[test]
fn oracle_reaches_ceiling_at_the_point_mass_distance() {
    let p = DiscreteDistribution::new(vec![0.5, 0.3, 0.2]).unwrap();
    let losses = vec![0.2, 0.4, 0.9];
    let point = DiscreteDistribution::point_mass(3, 2).unwrap();
    let d = discrete_hellinger(&p, &point);
    let inst = DiscreteInstance::new(p, losses, 0.9, HellingerRadius::new(d).unwrap()).unwrap();
    assert!((worst_case_sup(&inst).unwrap().value - 0.9).abs() < 1e-9);
    let beyond = inst.with_rho(HellingerRadius::new(d + 0.05).unwrap());
    assert_eq!(worst_case_sup(&beyond).unwrap().value, 0.9);
}
