use ria_core::{run_sweep, Scheme, SimConfig, SweepRecord};

fn mean_at(records: &[SweepRecord], scheme: Scheme, eps: f64, db: f64) -> &SweepRecord {
    records
        .iter()
        .find(|r| r.scheme == scheme && r.epsilon == eps && r.snr_db == db)
        .unwrap()
}

#[test]
fn mean_rate_increases_with_feedback_quality() {
    let eps = [0.01, 0.2, 0.5, 0.7, 0.9, 1.0];
    let config = SimConfig {
        snr_db: vec![20.0, 30.0, 40.0],
        epsilon: eps.to_vec(),
        trials: 500,
        seed: 17,
        schemes: vec![Scheme::Ria],
        ..SimConfig::new(3)
    };
    let res = run_sweep(&config).unwrap();
    for db in [20.0, 30.0, 40.0] {
        let rates: Vec<f64> = eps.iter().map(|&e| mean_at(&res.records, Scheme::Ria, e, db).mean_rate).collect();
        assert!(rates.windows(2).all(|w| w[1] >= w[0]), "{db} dB: {rates:?}");
    }
}

#[test]
fn crossover_at_40db() {
    let config = SimConfig {
        snr_db: vec![40.0],
        epsilon: vec![0.01, 1.0],
        trials: 500,
        seed: 18,
        ..SimConfig::new(3)
    };
    let res = run_sweep(&config).unwrap();
    let tdma = mean_at(&res.records, Scheme::Tdma, 1.0, 40.0).mean_rate;
    assert!(mean_at(&res.records, Scheme::Ria, 1.0, 40.0).mean_rate > tdma);
    assert!(mean_at(&res.records, Scheme::Ria, 0.01, 40.0).mean_rate < tdma);
}

#[test]
fn doubling_trials_is_stable() {
    let base = SimConfig {
        snr_db: vec![10.0, 30.0],
        epsilon: vec![0.5],
        trials: 400,
        seed: 19,
        ..SimConfig::new(3)
    };
    let small = run_sweep(&base).unwrap();
    let big = run_sweep(&SimConfig { trials: 800, ..base }).unwrap();
    for (a, b) in small.records.iter().zip(&big.records) {
        let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        assert!((a.mean_rate - b.mean_rate).abs() < 3.0 * se, "{a:?} vs {b:?}");
    }
}

#[test]
fn outage_below_upper_percentile() {
    let config = SimConfig {
        snr_db: vec![20.0],
        epsilon: vec![0.7],
        trials: 200,
        seed: 20,
        percentile: 90.0,
        ..SimConfig::new(3)
    };
    let p90 = run_sweep(&config).unwrap();
    let p10 = run_sweep(&SimConfig { percentile: 10.0, ..config }).unwrap();
    for (lo, hi) in p10.records.iter().zip(&p90.records) {
        assert!(lo.outage_rate <= hi.outage_rate);
        assert!(lo.outage_rate <= lo.mean_rate);
    }
}
