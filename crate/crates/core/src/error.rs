use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("need at least 2 users, got {0}")]
    TooFewUsers(usize),
    #[error("need at least as many transmit antennas as users (M = {antennas} < K = {users})")]
    TooFewAntennas { users: usize, antennas: usize },
    #[error("feedback quality must lie in [0, 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("SNR must be positive and finite, got {0}")]
    InvalidPower(f64),
    #[error("channel estimate has zero norm; cannot normalize the retrospective precoder")]
    DegenerateEstimate,
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("DoF slope needs P_hi > P_lo, got P_lo = {lo}, P_hi = {hi}")]
    SlopeOrder { lo: f64, hi: f64 },
    #[error("percentile must lie strictly inside (0, 100), got {0}")]
    PercentileOutOfRange(f64),
    #[error("no samples")]
    EmptySamples,
    #[error("invalid configuration: {0}")]
    Config(String),
}
