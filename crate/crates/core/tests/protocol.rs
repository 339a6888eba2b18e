use witness_sim::cli_io::to_json;
use witness_sim::protocol::{
    run_witness_experiment, sweep_gamma, sweep_q, BatchPolicy, ExperimentConfig, DEFAULT_N,
};
use witness_sim::stats::{bootstrap_spread, bootstrap_spread_with_seeds};
use witness_sim::{MixtureKind, Scheme};

fn local(q: f64, n: u64) -> ExperimentConfig {
    ExperimentConfig {
        n,
        ..ExperimentConfig::default()
    }
    .with_q(q)
}

fn within_sqrt(got: u64, expected: u64, k: f64) -> bool {
    (got as f64 - expected as f64).abs() <= k * (expected as f64).sqrt()
}

#[test]
fn white_noise_counts_are_balanced() {
    let r = run_witness_experiment(&local(0.0, DEFAULT_N)).unwrap();
    let c = r.counts.to_array();
    for &x in &c[..4] {
        assert!(within_sqrt(x, 31245, 5.0), "{c:?}");
    }
    for &x in &c[4..] {
        assert!(within_sqrt(x, 29625, 5.0), "{c:?}");
    }
}

#[test]
fn singlet_counts_anticorrelate() {
    let r = run_witness_experiment(&local(1.0, DEFAULT_N)).unwrap();
    let c = r.counts;
    assert!(
        within_sqrt(c.hv, 54082, 5.0) && within_sqrt(c.lr, 53842, 5.0),
        "{c:?}"
    );
    assert!(
        within_sqrt(c.hh, 4203, 5.0) && within_sqrt(c.dd, 4210, 5.0),
        "{c:?}"
    );
}

#[test]
fn joint_singlet_has_no_parallel_coincidences() {
    let cfg = ExperimentConfig {
        scheme: Scheme::Joint,
        n: 1 << 17,
        ..ExperimentConfig::default()
    };
    let r = run_witness_experiment(&cfg).unwrap();
    assert_eq!(
        (r.counts.hh, r.counts.vv, r.counts.dd, r.counts.aa),
        (0, 0, 0, 0)
    );
    assert!((r.estimates.w_est.unwrap() + 0.5).abs() < 0.02);
    assert_eq!(r.estimates.q_est, Some(1.0));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = ExperimentConfig {
        batch_policy: BatchPolicy::PerCount,
        ..local(0.4, (1 << 15) + 7)
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| to_json(&run_witness_experiment(&cfg).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn seed_changes_counts() {
    let a = run_witness_experiment(&local(0.5, 1 << 14)).unwrap();
    let b = run_witness_experiment(&local(0.5, 1 << 14).with_seed(2)).unwrap();
    assert_ne!(a.counts, b.counts);
}

#[test]
fn single_point_sweep_matches_direct_run() {
    let cfg = local(0.6, 1 << 14);
    let sweep = sweep_q(&cfg, &[0.6]).unwrap();
    assert_eq!(sweep.rows[0].result, run_witness_experiment(&cfg).unwrap());
}

#[test]
fn sweep_rows_are_sorted_and_indexed() {
    let sweep = sweep_q(&local(0.0, 1 << 12), &[1.0, 0.0, 0.5]).unwrap();
    let params: Vec<f64> = sweep.rows.iter().map(|r| r.param).collect();
    assert_eq!(params, [0.0, 0.5, 1.0]);
    for (i, row) in sweep.rows.iter().enumerate() {
        assert_eq!(row.result.sweep_index, i as u64);
        assert_eq!(row.result.config.model.q, row.param);
    }
    assert!(sweep_q(&local(0.0, 1 << 12), &[]).is_err());
    assert!(sweep_q(&local(0.0, 1 << 12), &[1.5]).is_err());
}

#[test]
fn normalized_witness_tracks_coincidence_yield_for_white_noise() {
    let r = run_witness_experiment(&local(0.0, DEFAULT_N)).unwrap();
    let eff = r.efficiencies.unwrap();
    let wn = r.estimates.w_normalized_by_n;
    assert!(
        (wn - 0.25 * eff.true_eff.eps_ab).abs() < 0.005,
        "{wn} vs {}",
        eff.true_eff.eps_ab
    );
}

#[test]
fn high_threshold_gives_degenerate_result() {
    let sweep = sweep_gamma(&local(1.0, 1 << 14), &[1.3]).unwrap();
    let r = &sweep.rows[0].result;
    assert!(r.is_degenerate());
    assert_eq!(r.estimates.w_est, None);
    assert_eq!(r.estimates.coincidence_yield, 0.0);
}

#[test]
fn gaussian_mixture_gives_comparable_statistics() {
    let d = run_witness_experiment(&local(0.3, 1 << 18)).unwrap();
    let mut g = local(0.3, 1 << 18);
    g.model.kind = MixtureKind::Gaussian;
    let g = run_witness_experiment(&g).unwrap();
    assert!(g.estimates.w_est.unwrap() < d.estimates.w_est.unwrap() + 0.1);
    assert!(g.estimates.coincidence_yield > 0.05);
}

#[test]
fn error_bars_shrink_with_n() {
    let cfg = |n| ExperimentConfig {
        batch_policy: BatchPolicy::PerCount,
        ..local(0.6, n)
    };
    let seeds: Vec<u64> = (0..60).collect();
    let small = bootstrap_spread_with_seeds(&cfg(1 << 12), &seeds).unwrap();
    let large = bootstrap_spread_with_seeds(&cfg(1 << 14), &seeds).unwrap();
    let ratio = small.std_w / large.std_w;
    assert!((ratio - 2.0).abs() <= 0.6, "spread ratio {ratio}");
    let ratio = small.mean_delta_w / large.mean_delta_w;
    assert!((ratio - 2.0).abs() <= 0.2, "error-bar ratio {ratio}");
}

#[test]
fn singlet_error_bar_matches_spread() {
    let cfg = ExperimentConfig {
        batch_policy: BatchPolicy::PerCount,
        ..local(1.0, 1 << 14)
    };
    let s = bootstrap_spread(&cfg, 80).unwrap();
    let ratio = s.mean_delta_w / s.std_w;
    assert!((0.67..1.5).contains(&ratio), "ratio {ratio}");
}
