//! Front end for the RIA simulator: DoF bound tables, rate-vs-SNR sweeps
//! and outage-vs-feedback-quality sweeps, all emitted as CSV.

pub mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ria_core::bounds::ReferenceCurves;
use ria_core::{inner_bound, outer_bound, run_sweep, tdma_dof, Scheme, SimConfig, TdmaPower};

use table::{format_sig, OutputTable};

/// Environment variable capping the simulation worker count.
pub const THREADS_ENV: &str = "RIA_SIM_THREADS";

/// Invalid arguments; reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Numeric grid from a comma list whose items may be inclusive
/// `start:stop:step` ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim) {
            if item.is_empty() {
                return Err(format!("empty item in list {s:?}"));
            }
            let parts: Vec<&str> = item.split(':').collect();
            let num = |t: &str| -> Result<f64, String> {
                t.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("not a number: {t:?}"))
            };
            match parts.as_slice() {
                [v] => out.push(num(v)?),
                [a, b, step] => {
                    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                    if step <= 0.0 || b < a {
                        return Err(format!("range {item:?} needs start <= stop and step > 0"));
                    }
                    let n = ((b - a) / step + 1e-9).floor() as usize;
                    out.extend((0..=n).map(|i| a + i as f64 * step));
                }
                _ => return Err(format!("expected a number or start:stop:step, got {item:?}")),
            }
        }
        Ok(Grid(out))
    }
}

/// Plain comma-separated list of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("not a number: {t:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schemes(pub Vec<Scheme>);

impl FromStr for Schemes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut v: Vec<Scheme> = Vec::new();
        for t in s.split(',') {
            let scheme = t.parse::<Scheme>().map_err(|e| e.to_string())?;
            if !v.contains(&scheme) {
                v.push(scheme);
            }
        }
        Ok(Schemes(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TdmaPowerArg {
    /// P/M per antenna.
    Total,
    /// P per antenna.
    PerAntenna,
}

#[derive(Debug, Parser)]
#[command(name = "ria-sim", version, about = "Retrospective interference alignment simulator for the K-user MISO IC with imperfect delayed CSIT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// DoF-per-user bound table (inner, outer, TDMA and reference curves).
    Bounds(BoundsArgs),
    /// Mean and outage rate per user over an (epsilon, SNR) grid.
    Simulate(SimulateArgs),
    /// Outage rate per user over an epsilon grid at fixed SNRs.
    Outage(OutageArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 2)]
    pub kmin: usize,
    #[arg(long, default_value_t = 10)]
    pub kmax: usize,
    /// Feedback quality for the inner bound.
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// Write CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of transmitter/receiver pairs K.
    #[arg(long = "users", short = 'k', default_value_t = 3)]
    pub users: usize,
    /// Transmit antennas per user M (default K).
    #[arg(long = "antennas", short = 'm')]
    pub antennas: Option<usize>,
    /// Monte Carlo trials per grid cell.
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma list of schemes: ria, tdma.
    #[arg(long, default_value = "ria,tdma")]
    pub schemes: Schemes,
    /// Outage percentile, strictly between 0 and 100.
    #[arg(long, default_value_t = 10.0)]
    pub percentile: f64,
    /// TDMA baseline power normalization.
    #[arg(long, value_enum, default_value_t = TdmaPowerArg::Total)]
    pub tdma_power: TdmaPowerArg,
    /// Give RIA transmitters error-free delayed CSIT (ignores epsilon).
    #[arg(long)]
    pub perfect_csit: bool,
    /// Write CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// SNR grid in dB: comma list, items may be inclusive start:stop:step.
    #[arg(long = "snr-db", default_value = "5:40:5", allow_hyphen_values = true)]
    pub snr_db: Grid,
    /// Feedback qualities in [0, 1], comma list.
    #[arg(long, default_value = "0.01,0.2,0.5,0.7,0.9,1")]
    pub epsilon: List,
    /// Append a DoF slope table.
    #[arg(long)]
    pub dof: bool,
    /// SNR pair in dB (lo,hi) used for the DoF slope.
    #[arg(long, default_value = "40,60", allow_hyphen_values = true)]
    pub dof_anchors: List,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Args)]
pub struct OutageArgs {
    /// SNR values in dB: comma list, items may be inclusive start:stop:step.
    #[arg(long = "snr-db", default_value = "10,20,30,40", allow_hyphen_values = true)]
    pub snr_db: Grid,
    /// Feedback qualities in [0, 1], comma list.
    #[arg(long, default_value = "0.01,0.1,0.2,0.4,0.5,0.7,0.9,1")]
    pub epsilon: List,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

/// Worker cap from `RIA_SIM_THREADS`, if set.
pub fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn cmd_bounds(kmin: usize, kmax: usize, epsilon: f64) -> anyhow::Result<OutputTable> {
    if kmin < 1 || kmin > kmax {
        return Err(usage(format!("need 1 <= kmin <= kmax, got kmin={kmin}, kmax={kmax}")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(usage(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let mut t = OutputTable::new([
        "K",
        "thm1_inner",
        "thm1_outer",
        "tdma",
        "ghasemi_inner",
        "ghasemi_outer",
        "abdoli_inner",
    ]);
    for k in kmin..=kmax {
        t.push(vec![
            k.into(),
            inner_bound(k, epsilon).into(),
            outer_bound(k).into(),
            tdma_dof(k).into(),
            ReferenceCurves::value("ghasemi_inner", k).into(),
            ReferenceCurves::value("ghasemi_outer", k).into(),
            ReferenceCurves::value("abdoli_siso_inner", k).into(),
        ]);
    }
    Ok(t)
}

fn outage_column(percentile: f64) -> String {
    format!("outage{}", format_sig(percentile, 9))
}

fn base_config(sweep: &SweepArgs, snr_db: &Grid, epsilon: &List) -> anyhow::Result<SimConfig> {
    if epsilon.0.is_empty() {
        return Err(usage("epsilon list is empty"));
    }
    let config = SimConfig {
        users: sweep.users,
        antennas: sweep.antennas.unwrap_or(sweep.users),
        snr_db: snr_db.0.clone(),
        epsilon: epsilon.0.clone(),
        trials: sweep.trials,
        seed: sweep.seed,
        schemes: sweep.schemes.0.clone(),
        dof_anchors: None,
        percentile: sweep.percentile,
        tdma_power: match sweep.tdma_power {
            TdmaPowerArg::Total => TdmaPower::Total,
            TdmaPowerArg::PerAntenna => TdmaPower::PerAntenna,
        },
        perfect_csit: sweep.perfect_csit,
        workers: threads_from_env()?,
    };
    config.validate().map_err(|e| usage(e.to_string()))?;
    Ok(config)
}

/// Sweep table plus, with `--dof`, the slope table.
pub fn cmd_simulate(args: &SimulateArgs) -> anyhow::Result<Vec<OutputTable>> {
    let mut config = base_config(&args.sweep, &args.snr_db, &args.epsilon)?;
    if args.dof {
        match args.dof_anchors.0.as_slice() {
            &[lo, hi] if hi > lo => config.dof_anchors = Some((lo, hi)),
            other => return Err(usage(format!("--dof-anchors needs lo,hi with lo < hi, got {other:?}"))),
        }
    }
    let result = run_sweep(&config)?;

    let outage = outage_column(config.percentile);
    let mut records = OutputTable::new([
        "scheme", "K", "epsilon", "snr_db", "trials", "mean_rate", &outage, "std_err",
    ]);
    for r in &result.records {
        records.push(vec![
            r.scheme.name().into(),
            r.users.into(),
            r.epsilon.into(),
            r.snr_db.into(),
            r.trials.into(),
            r.mean_rate.into(),
            r.outage_rate.into(),
            r.std_error.into(),
        ]);
    }
    let mut tables = vec![records];
    if args.dof {
        let mut slopes = OutputTable::new([
            "scheme", "K", "epsilon", "snr_lo_db", "snr_hi_db", "dof_slope", "dof_theory",
        ]);
        for s in &result.slopes {
            slopes.push(vec![
                s.scheme.name().into(),
                s.users.into(),
                s.epsilon.into(),
                s.snr_lo_db.into(),
                s.snr_hi_db.into(),
                s.slope.into(),
                s.theory.into(),
            ]);
        }
        tables.push(slopes);
    }
    Ok(tables)
}

pub fn cmd_outage(args: &OutageArgs) -> anyhow::Result<OutputTable> {
    let config = base_config(&args.sweep, &args.snr_db, &args.epsilon)?;
    let result = run_sweep(&config)?;
    let mut t = OutputTable::new(["scheme", "K", "epsilon", "snr_db", &outage_column(config.percentile)]);
    for r in &result.records {
        t.push(vec![
            r.scheme.name().into(),
            r.users.into(),
            r.epsilon.into(),
            r.snr_db.into(),
            r.outage_rate.into(),
        ]);
    }
    Ok(t)
}

/// Runs a parsed command, returning the tables and the output path.
pub fn execute(cli: &Cli) -> anyhow::Result<(Vec<OutputTable>, Option<PathBuf>)> {
    match &cli.command {
        Command::Bounds(a) => Ok((vec![cmd_bounds(a.kmin, a.kmax, a.epsilon)?], a.output.clone())),
        Command::Simulate(a) => Ok((cmd_simulate(a)?, a.sweep.output.clone())),
        Command::Outage(a) => Ok((vec![cmd_outage(a)?], a.sweep.output.clone())),
    }
}
