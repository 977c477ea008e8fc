mod support;

use ria_core::metrics::RateSample;
use ria_core::sim::trial_rng;
use ria_core::{assemble_extended, build_schedule, corrupt_csit, db_to_linear, draw_channels};

#[test]
fn filtered_rate_matches_direct_evaluation() {
    for k in 2..=5 {
        let sched = build_schedule(k).unwrap();
        for t in 0..25u64 {
            let eps = (t % 5) as f64 / 4.0;
            let p = db_to_linear(5.0 + 7.0 * (t % 8) as f64);
            let ch = draw_channels(k, k, &sched, &mut trial_rng(3, t, k as u64)).unwrap();
            let csit = corrupt_csit(&ch, eps, p, &mut trial_rng(4, t, k as u64)).unwrap();
            let sys = assemble_extended(&ch, &csit, &sched, p).unwrap();
            let rates = RateSample::from_system(&sys, p, eps).unwrap();
            for (j, r) in rates.per_user_rate.iter().enumerate() {
                let direct = support::oracle::direct_rate(&sys, j);
                assert!(
                    (r - direct).abs() <= 1e-9 * direct.abs().max(1e-12),
                    "K={k} t={t} user {j}: {r} vs {direct}"
                );
            }
        }
    }
}
