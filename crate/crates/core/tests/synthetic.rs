use gramcert::experiments::compare::{run_compare, CompareConfig};
use gramcert::Execution;

#[test]
fn default_sweep_separates_the_certificates() {
    let out = run_compare(&CompareConfig::default(), Execution::default()).unwrap();
    let rows = &out.rows;
    assert_eq!(rows.len(), 32);

    // The shifted loss never exceeds the Gramian certificate.
    for r in rows {
        assert!(r.empirical_loss_shifted <= r.gramian_cert, "{r:?}");
    }
    // Somewhere the Gramian certificate sits strictly below both baselines,
    // and somewhere the dual certificate is vacuous while the Gramian is not.
    assert!(rows.iter().any(|r| r.gramian_cert < r.dual_cert && r.gramian_cert < r.lipschitz_cert));
    assert!(rows.iter().any(|r| r.dual_cert > 1.0 && r.gramian_cert <= 1.0));

    let first = &rows[0];
    assert_eq!(first.norm_delta, 0.01);
    for c in [first.gramian_cert, first.dual_cert, first.lipschitz_cert] {
        assert!((c - first.empirical_loss_shifted).abs() <= 0.02);
    }
    for w in rows.windows(2) {
        assert!(w[1].dual_cert >= w[0].dual_cert);
        assert!(w[1].lipschitz_cert >= w[0].lipschitz_cert);
    }
}

#[test]
fn wider_and_deeper_networks_also_separate() {
    let cfg = CompareConfig {
        widths: vec![8, 32],
        depths: vec![3],
        norm_deltas: vec![0.5, 1.0, 2.0, 3.0],
        n_train: 1000,
        n_eval: 1000,
        ..Default::default()
    };
    let out = run_compare(&cfg, Execution::default()).unwrap();
    assert_eq!(out.architectures.len(), 2);
    for arch in &out.architectures {
        assert!(arch.alpha <= 1.0 + 1e-6);
        let rows: Vec<_> = out.rows.iter().filter(|r| r.width == arch.width).collect();
        assert!(rows.iter().any(|r| r.gramian_cert < r.dual_cert), "width {}", arch.width);
    }
}
