//! Seeded Monte Carlo engine for RIA and the no-CSIT TDMA baseline.
//!
//! Each trial owns two ChaCha8 streams derived from `(seed, trial, tag)`
//! with a SplitMix64 mix: one for the channel realization, one for the
//! unit-power CSIT error directions. Neither depends on `ε`, the SNR or the
//! scheme, so every grid cell and both schemes see the same channels
//! (common random numbers), and results do not depend on how trials are
//! spread over worker threads. Aggregation always runs in trial order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{inner_bound, tdma_dof};
use crate::channel::{corrupt_csit, draw_channels, ChannelSet, CsitReport};
use crate::metrics::{dof_slope, outage_rate, RateSample};
use crate::protocol::{assemble_extended, build_schedule, Schedule};
use crate::{db_to_linear, Error, Result};

const CHANNEL_STREAM: u64 = 0x6368_616e_6e65_6c73;
const CEE_STREAM: u64 = 0x6373_6974_2d65_7272;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ria,
    Tdma,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ria => "ria",
            Scheme::Tdma => "tdma",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ria" => Ok(Scheme::Ria),
            "tdma" => Ok(Scheme::Tdma),
            other => Err(Error::Config(format!("unknown scheme {other:?}"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Power normalization of the TDMA baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TdmaPower {
    /// Isotropic, `P/M` per antenna (total `P`).
    #[default]
    Total,
    /// `P` per antenna.
    PerAntenna,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub users: usize,
    pub antennas: usize,
    pub snr_db: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    /// `(lo, hi)` SNR in dB for the DoF slope table; `None` skips it.
    pub dof_anchors: Option<(f64, f64)>,
    pub percentile: f64,
    pub tdma_power: TdmaPower,
    /// Replace the noisy reports by the true phase-1 channels.
    pub perfect_csit: bool,
    /// Worker thread cap; `None` uses rayon's default.
    pub workers: Option<usize>,
}

impl SimConfig {
    pub fn new(users: usize) -> Self {
        SimConfig {
            users,
            antennas: users,
            snr_db: vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
            epsilon: vec![0.01, 0.2, 0.5, 0.7, 0.9, 1.0],
            trials: 2000,
            seed: 1,
            schemes: vec![Scheme::Ria, Scheme::Tdma],
            dof_anchors: None,
            percentile: 10.0,
            tdma_power: TdmaPower::Total,
            perfect_csit: false,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.users < 2 {
            return Err(Error::TooFewUsers(self.users));
        }
        if self.antennas < self.users {
            return Err(Error::TooFewAntennas {
                users: self.users,
                antennas: self.antennas,
            });
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if let Some(bad) = self.snr_db.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("SNR {bad} dB is not finite")));
        }
        if self.epsilon.is_empty() {
            return Err(Error::Config("feedback-quality grid is empty".into()));
        }
        if let Some(&bad) = self.epsilon.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::EpsilonOutOfRange(bad));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        if !(self.percentile > 0.0 && self.percentile < 100.0) {
            return Err(Error::PercentileOutOfRange(self.percentile));
        }
        if let Some((lo, hi)) = self.dof_anchors {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::Config(format!("DoF anchors must satisfy lo < hi, got {lo}, {hi}")));
            }
        }
        Ok(())
    }
}

/// Per-user rates of one trial, for each scheme the config selects.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRates {
    pub ria: Option<Vec<f64>>,
    pub tdma: Option<Vec<f64>>,
}

impl TrialRates {
    pub fn get(&self, scheme: Scheme) -> Option<&[f64]> {
        match scheme {
            Scheme::Ria => self.ria.as_deref(),
            Scheme::Tdma => self.tdma.as_deref(),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for stream `tag` of trial `trial`.
pub fn trial_rng(seed: u64, trial: u64, tag: u64) -> ChaCha8Rng {
    let s = splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ tag);
    ChaCha8Rng::seed_from_u64(s)
}

fn tdma_rates(channels: &ChannelSet, power: f64, norm: TdmaPower) -> Vec<f64> {
    let k = channels.users();
    let per_antenna = match norm {
        TdmaPower::Total => power / channels.antennas() as f64,
        TdmaPower::PerAntenna => power,
    };
    (0..k)
        .map(|j| {
            let gain: f64 = channels
                .ot_link(j, j)
                .expect("complete channel set")
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
            (1.0 + per_antenna * gain).log2() / k as f64
        })
        .collect()
}

fn trial_with_schedule(
    config: &SimConfig,
    schedule: &Schedule,
    epsilon: f64,
    power: f64,
    trial: u64,
) -> Result<TrialRates> {
    let mut ch_rng = trial_rng(config.seed, trial, CHANNEL_STREAM);
    let channels = draw_channels(config.users, config.antennas, schedule, &mut ch_rng)?;

    let ria = if config.schemes.contains(&Scheme::Ria) {
        let csit = if config.perfect_csit {
            CsitReport::perfect(&channels)
        } else {
            let mut cee_rng = trial_rng(config.seed, trial, CEE_STREAM);
            corrupt_csit(&channels, epsilon, power, &mut cee_rng)?
        };
        let system = assemble_extended(&channels, &csit, schedule, power)?;
        Some(RateSample::from_system(&system, power, epsilon)?.per_user_rate)
    } else {
        None
    };
    let tdma = config
        .schemes
        .contains(&Scheme::Tdma)
        .then(|| tdma_rates(&channels, power, config.tdma_power));
    Ok(TrialRates { ria, tdma })
}

/// Runs trial `trial` at feedback quality `epsilon` and linear SNR `power`.
///
/// TDMA rates are `(1/K)·log₂(1 + (P/M)‖h_{j,j}‖²)` (or `P` per antenna
/// under [`TdmaPower::PerAntenna`]) on the same channel draw RIA uses.
pub fn run_trial(config: &SimConfig, epsilon: f64, power: f64, trial: u64) -> Result<TrialRates> {
    config.validate()?;
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let schedule = build_schedule(config.users)?;
    trial_with_schedule(config, &schedule, epsilon, power, trial)
}

/// Aggregated result for one `(scheme, ε, SNR)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub scheme: Scheme,
    pub users: usize,
    pub epsilon: f64,
    pub snr_db: f64,
    /// Trials that completed.
    pub trials: usize,
    /// Trials dropped on a degenerate draw.
    pub skipped: usize,
    pub mean_rate: f64,
    pub outage_rate: f64,
    pub std_error: f64,
}

/// Finite-difference DoF estimate for one `(scheme, ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeRecord {
    pub scheme: Scheme,
    pub users: usize,
    pub epsilon: f64,
    pub snr_lo_db: f64,
    pub snr_hi_db: f64,
    pub slope: f64,
    /// Closed-form DoF per user for comparison.
    pub theory: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    pub slopes: Vec<SlopeRecord>,
}

type CellResults = Vec<Option<TrialRates>>;

/// Evaluates every `(ε, SNR)` cell for every trial; `[trial][cell]`, cell
/// index `e * snr.len() + s`. Degenerate trials come back as `None`.
fn evaluate(config: &SimConfig, snr_db: &[f64]) -> Result<Vec<CellResults>> {
    let schedule = build_schedule(config.users)?;
    let run = |trial: usize| -> Result<CellResults> {
        let mut out = Vec::with_capacity(config.epsilon.len() * snr_db.len());
        for &eps in &config.epsilon {
            for &db in snr_db {
                match trial_with_schedule(config, &schedule, eps, db_to_linear(db), trial as u64) {
                    Ok(r) => out.push(Some(r)),
                    Err(Error::DegenerateEstimate) => out.push(None),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| (0..config.trials).into_par_iter().map(run).collect())
}

fn aggregate(
    config: &SimConfig,
    results: &[CellResults],
    scheme: Scheme,
    cell: usize,
    epsilon: f64,
    snr_db: f64,
) -> Result<SweepRecord> {
    let mut pooled = Vec::with_capacity(results.len() * config.users);
    let mut per_trial = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for trial in results {
        match trial[cell].as_ref().and_then(|r| r.get(scheme)) {
            Some(rates) => {
                pooled.extend_from_slice(rates);
                per_trial.push(rates.iter().sum::<f64>() / rates.len() as f64);
            }
            None => skipped += 1,
        }
    }
    let n = per_trial.len();
    if n == 0 {
        return Err(Error::Config(format!(
            "every trial of {scheme} at eps={epsilon}, {snr_db} dB was degenerate"
        )));
    }
    let mean = per_trial.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = per_trial.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(SweepRecord {
        scheme,
        users: config.users,
        epsilon,
        snr_db,
        trials: n,
        skipped,
        mean_rate: mean,
        outage_rate: outage_rate(&pooled, config.percentile)?,
        std_error,
    })
}

fn records_for(config: &SimConfig, snr_db: &[f64], results: &[CellResults]) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for &scheme in &config.schemes {
        for (e, &eps) in config.epsilon.iter().enumerate() {
            for (s, &db) in snr_db.iter().enumerate() {
                records.push(aggregate(config, results, scheme, e * snr_db.len() + s, eps, db)?);
            }
        }
    }
    Ok(records)
}

/// Runs the full `(scheme, ε, SNR)` grid. Records are ordered by scheme,
/// then `ε`, then SNR, in config order; the outage column is the configured
/// percentile of the per-user rates pooled over trials and users.
pub fn run_sweep(config: &SimConfig) -> Result<SweepResult> {
    config.validate()?;
    let results = evaluate(config, &config.snr_db)?;
    let records = records_for(config, &config.snr_db, &results)?;

    let mut slopes = Vec::new();
    if let Some((lo, hi)) = config.dof_anchors {
        let anchors = [lo, hi];
        let at_anchors = evaluate(config, &anchors)?;
        let anchor_records = records_for(config, &anchors, &at_anchors)?;
        for pair in anchor_records.chunks(2) {
            let (r_lo, r_hi) = (&pair[0], &pair[1]);
            let theory = match r_lo.scheme {
                Scheme::Ria if config.perfect_csit => inner_bound(config.users, 1.0),
                Scheme::Ria => inner_bound(config.users, r_lo.epsilon),
                Scheme::Tdma => tdma_dof(config.users),
            };
            slopes.push(SlopeRecord {
                scheme: r_lo.scheme,
                users: config.users,
                epsilon: r_lo.epsilon,
                snr_lo_db: lo,
                snr_hi_db: hi,
                slope: dof_slope(db_to_linear(lo), r_lo.mean_rate, db_to_linear(hi), r_hi.mean_rate)?,
                theory,
            });
        }
    }
    Ok(SweepResult { records, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(users: usize) -> SimConfig {
        SimConfig {
            trials: 40,
            snr_db: vec![10.0, 30.0],
            epsilon: vec![0.2, 1.0],
            seed: 42,
            ..SimConfig::new(users)
        }
    }

    #[test]
    fn trial_is_deterministic() {
        let c = small(3);
        let a = run_trial(&c, 0.5, 1e3, 7).unwrap();
        let b = run_trial(&c, 0.5, 1e3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, run_trial(&c, 0.5, 1e3, 8).unwrap());
    }

    #[test]
    fn perfect_csit_positive_rates() {
        let c = SimConfig {
            perfect_csit: true,
            ..small(4)
        };
        let r = run_trial(&c, 0.0, 1e3, 0).unwrap();
        assert!(r.ria.unwrap().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn tdma_formula() {
        let c = small(3);
        let p = 1e2;
        let r = run_trial(&c, 0.3, p, 5).unwrap();
        let schedule = build_schedule(3).unwrap();
        let ch = draw_channels(3, 3, &schedule, &mut trial_rng(42, 5, CHANNEL_STREAM)).unwrap();
        for (j, rate) in r.tdma.unwrap().iter().enumerate() {
            let g: f64 = ch.link(j, j, j).unwrap().iter().map(|z| z.norm_sqr()).sum();
            assert!((rate - (1.0 + p / 3.0 * g).log2() / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_shape_and_order() {
        let res = run_sweep(&small(3)).unwrap();
        assert_eq!(res.records.len(), 2 * 2 * 2);
        let keys: Vec<_> = res
            .records
            .iter()
            .map(|r| (r.scheme, r.epsilon, r.snr_db))
            .collect();
        assert_eq!(keys[0], (Scheme::Ria, 0.2, 10.0));
        assert_eq!(keys[1], (Scheme::Ria, 0.2, 30.0));
        assert_eq!(keys[4], (Scheme::Tdma, 0.2, 10.0));
        assert!(res.slopes.is_empty());
        for r in &res.records {
            assert!(r.mean_rate >= 0.0 && r.outage_rate >= 0.0);
            assert!(r.outage_rate <= r.mean_rate * 1.5);
            assert_eq!(r.trials, 40);
        }
    }

    #[test]
    fn tdma_ignores_epsilon() {
        let res = run_sweep(&small(3)).unwrap();
        let tdma: Vec<_> = res.records.iter().filter(|r| r.scheme == Scheme::Tdma).collect();
        assert_eq!(tdma[0].mean_rate, tdma[2].mean_rate);
        assert_eq!(tdma[1].outage_rate, tdma[3].outage_rate);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = run_sweep(&SimConfig {
            workers: Some(1),
            ..small(3)
        })
        .unwrap();
        let many = run_sweep(&SimConfig {
            workers: Some(5),
            ..small(3)
        })
        .unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn config_errors() {
        let mut c = small(3);
        c.epsilon.clear();
        assert!(matches!(run_sweep(&c), Err(Error::Config(_))));
        let c = SimConfig { snr_db: vec![], ..small(3) };
        assert!(run_sweep(&c).is_err());
        let c = SimConfig { trials: 0, ..small(3) };
        assert!(run_sweep(&c).is_err());
        let c = SimConfig { epsilon: vec![1.2], ..small(3) };
        assert_eq!(run_sweep(&c), Err(Error::EpsilonOutOfRange(1.2)));
        let c = SimConfig { antennas: 2, ..small(3) };
        assert!(run_sweep(&c).is_err());
        let c = SimConfig { dof_anchors: Some((60.0, 40.0)), ..small(3) };
        assert!(run_sweep(&c).is_err());
    }

    #[test]
    fn slope_table_present() {
        let c = SimConfig {
            dof_anchors: Some((40.0, 60.0)),
            epsilon: vec![1.0],
            trials: 100,
            ..small(3)
        };
        let res = run_sweep(&c).unwrap();
        assert_eq!(res.slopes.len(), 2);
        let ria = &res.slopes[0];
        assert_eq!(ria.scheme, Scheme::Ria);
        assert!((ria.slope - 0.5).abs() < 0.06, "{}", ria.slope);
        assert!((res.slopes[1].slope - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("RIA".parse::<Scheme>().unwrap(), Scheme::Ria);
        assert_eq!(" tdma".parse::<Scheme>().unwrap(), Scheme::Tdma);
        assert!("zf".parse::<Scheme>().is_err());
    }
}
