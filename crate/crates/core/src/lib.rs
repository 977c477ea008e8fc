//! Retrospective interference alignment (RIA) for the K-user MISO
//! interference channel when transmitters only learn past channels, and
//! learn them imperfectly.
//!
//! The crate is organised bottom-up:
//!
//! * [`channel`] draws flat Rayleigh fading realizations and the noisy
//!   delayed channel reports the transmitters act on.
//! * [`protocol`] builds the two-phase slot schedule, the orthogonal and
//!   retrospective precoders, the stacked per-user system and the
//!   interference-cancelling receive filters.
//! * [`metrics`] turns a stacked system into interference-plus-noise
//!   covariances, achievable rates, DoF slope estimates and outage
//!   percentiles.
//! * [`bounds`] holds the closed-form DoF inner/outer bounds and the
//!   reference comparison curves.
//! * [`sim`] runs seeded Monte Carlo sweeps of the whole pipeline against a
//!   no-CSIT TDMA baseline.
//!
//! Users, transmitters and slots are indexed from zero throughout.

pub mod bounds;
pub mod channel;
mod error;
pub mod metrics;
pub mod protocol;
pub mod sim;

pub use error::{Error, Result};

pub use bounds::{crossover_epsilon, inner_bound, outer_bound, tdma_dof, ReferenceCurves};
pub use channel::{corrupt_csit, draw_channels, ChannelSet, CsitReport};
pub use metrics::{
    dof_slope, noise_interference_cov, outage_rate, theoretical_dof_k3, user_rate, RateSample,
};
pub use protocol::{
    assemble_extended, build_schedule, ot_precoder, receive_filter, ria_precoder, ExtendedSystem,
    Phase, PrecoderSet, Schedule, Slot, UserSystem,
};
pub use sim::{run_sweep, run_trial, Scheme, SimConfig, SlopeRecord, SweepRecord, SweepResult, TdmaPower, TrialRates};

/// Complex scalar used for every channel gain and matrix entry.
pub type Complex = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<Complex>;

/// Converts a power in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
