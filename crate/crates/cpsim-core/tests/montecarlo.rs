//! Integration checks for the replica harness: determinism across runs and
//! thread counts, contamination accounting at realistic scale, and the
//! estimation tables driven end to end from sampled experiments.

use cpsim_core::montecarlo::{
    run_experiment, ContaminationPolicy, DecayTransform, ExperimentConfig, KernelSpec, Observable,
};

fn interface_config(lambda: f64, t_max: f64, grid: Vec<f64>, replicas: u64) -> ExperimentConfig {
    ExperimentConfig {
        kernel: KernelSpec::nearest_neighbor(lambda),
        t_max,
        grid,
        replicas,
        seed_base: 02_2021,
        guard: None,
        observables: vec![Observable::Interface],
        contamination: ContaminationPolicy::Discard,
    }
}

#[test]
fn reruns_and_thread_counts_agree_byte_for_byte() {
    let cfg = interface_config(2.0, 6.0, vec![2.0, 4.0, 6.0], 24);
    let a = run_experiment(&cfg, 1).unwrap();
    let b = run_experiment(&cfg, 4).unwrap();
    let c = run_experiment(&cfg, 0).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_csv(), c.to_csv());
    assert_eq!(a.summary_json().unwrap(), b.summary_json().unwrap());
    assert_eq!(a.config_hash, b.config_hash);
}

#[test]
fn default_guard_band_keeps_contamination_below_one_percent() {
    // Moderate-scale version of the budget check that the acceptance suite
    // runs at full size: supercritical rate, horizon 40, default guard.
    let cfg = interface_config(4.0, 40.0, vec![10.0, 20.0, 40.0], 200);
    let store = run_experiment(&cfg, 0).unwrap();
    let flagged = store.contaminated();
    assert!(
        (flagged as f64) < 0.01 * store.total() as f64,
        "default guard band let {flagged}/{} replicas touch the edges",
        store.total()
    );
    // The tail table reports the effective count it actually used.
    let rows = store.tail_estimates(&[0, 5, 10]).unwrap();
    for row in &rows {
        assert_eq!(row.n + row.excluded, store.total());
        assert!(row.n >= store.effective());
    }
}

#[test]
fn interface_is_wider_near_criticality_than_deep_in_the_supercritical_phase() {
    // Sanity anchoring of the tail table: near the survival threshold the
    // two trajectories disagree over a wide fluctuating region, while deep
    // in the supercritical phase the dense upper state couples to the
    // half-line state right at its edge and the interface hugs zero.
    let near = run_experiment(&interface_config(3.5, 8.0, vec![8.0], 120), 0).unwrap();
    let deep = run_experiment(&interface_config(6.0, 8.0, vec![8.0], 120), 0).unwrap();
    let p = |store: &cpsim_core::montecarlo::SampleStore| {
        store.tail_estimates(&[6]).unwrap()[0].p_hat
    };
    assert!(p(&near) > p(&deep), "near {} <= deep {}", p(&near), p(&deep));
}

#[test]
fn speed_estimates_point_at_the_edge_drift() {
    // At a supercritical rate the half-line edge drifts right; the CI at a
    // moderate horizon should exclude zero from below.
    let mut cfg = interface_config(5.0, 20.0, vec![10.0, 20.0], 100);
    cfg.observables = vec![Observable::Edge];
    let store = run_experiment(&cfg, 0).unwrap();
    let est = store.speed_at(20.0).unwrap();
    assert!(est.alpha_hat > 0.0 && est.ci_lo > 0.0, "alpha {} lo {}", est.alpha_hat, est.ci_lo);
    assert!(est.used + est.excluded == store.total());
}

#[test]
fn short_horizons_keep_the_interface_tiny() {
    // The interface starts at rho = -1 and needs time to spread: at a short
    // horizon the far tail is still nearly empty.
    let cfg = interface_config(3.5, 2.0, vec![2.0], 200);
    let store = run_experiment(&cfg, 0).unwrap();
    let row = &store.tail_estimates(&[12]).unwrap()[0];
    assert!(row.p_hat < 0.05, "short-horizon tail at L=12 was {}", row.p_hat);
}

#[test]
fn decay_fit_consumes_tail_tables() {
    // A smoke pipeline: empirical tail probabilities against L fit a
    // decreasing log-linear trend at a fixed time.
    let cfg = interface_config(2.0, 10.0, vec![10.0], 400);
    let store = run_experiment(&cfg, 0).unwrap();
    let ls = [0i64, 1, 2, 3, 4, 5];
    let rows = store.tail_estimates(&ls).unwrap();
    let xs: Vec<f64> = ls.iter().map(|&l| l as f64).collect();
    let ps: Vec<f64> = rows.iter().map(|r| r.p_hat).collect();
    let fit = cpsim_core::montecarlo::decay_fit(&xs, &ps, DecayTransform::Identity).unwrap();
    assert!(fit.slope < 0.0, "tail must fall with L, slope {}", fit.slope);
}
