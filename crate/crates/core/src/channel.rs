//! Channel realizations and imperfect delayed CSIT.
//!
//! Every gain is drawn i.i.d. circularly-symmetric complex Gaussian with
//! unit variance (Rayleigh flat fading), independently across links,
//! antennas and slots. Transmitters only ever see noisy copies of the
//! phase-1 channels departing from themselves: `ĥ = h − h̃`, with `h̃`
//! independent of `h` and `E‖h̃‖² = P^{-ε}` split evenly over the antennas.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::protocol::{Phase, Schedule};
use crate::{Complex, Error, Result};

/// Draws one unit-variance circularly-symmetric complex Gaussian sample.
pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, PartialEq)]
struct SlotGains {
    phase: Phase,
    active: Vec<usize>,
    /// Row-major `[receiver][active transmitter][antenna]`.
    gains: Vec<Complex>,
}

/// True channel row-vectors `h_{j,i}^{(p,s)}` of one realization, for every
/// receiver `j` and every transmitter `i` active in slot `(p,s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    users: usize,
    antennas: usize,
    slots: Vec<SlotGains>,
}

impl ChannelSet {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    /// Channel from transmitter `tx` to receiver `rx` during global slot
    /// `slot`, or `None` when `tx` is silent in that slot.
    pub fn link(&self, rx: usize, tx: usize, slot: usize) -> Option<&[Complex]> {
        let s = self.slots.get(slot)?;
        if rx >= self.users {
            return None;
        }
        let a = s.active.iter().position(|&t| t == tx)?;
        let m = self.antennas;
        let start = (rx * s.active.len() + a) * m;
        Some(&s.gains[start..start + m])
    }

    /// Channel of the orthogonal-transmission slot of `tx`, as heard by `rx`.
    pub fn ot_link(&self, rx: usize, tx: usize) -> Option<&[Complex]> {
        let slot = self
            .slots
            .iter()
            .position(|s| s.phase == Phase::Orthogonal && s.active == [tx])?;
        self.link(rx, tx, slot)
    }

    /// Every gain of the realization, in storage order.
    pub fn gains(&self) -> impl Iterator<Item = &Complex> {
        self.slots.iter().flat_map(|s| s.gains.iter())
    }
}

/// Draws a complete channel realization for `schedule`.
///
/// Deterministic in the generator state: gains are consumed slot by slot,
/// then receiver, active transmitter and antenna.
pub fn draw_channels<R: Rng + ?Sized>(
    users: usize,
    antennas: usize,
    schedule: &Schedule,
    rng: &mut R,
) -> Result<ChannelSet> {
    if users < 2 {
        return Err(Error::TooFewUsers(users));
    }
    if antennas < users {
        return Err(Error::TooFewAntennas { users, antennas });
    }
    if schedule.users() != users {
        return Err(Error::Shape(format!(
            "schedule is for {} users, asked for {users}",
            schedule.users()
        )));
    }
    let slots = schedule
        .slots()
        .iter()
        .map(|slot| {
            let n = users * slot.active.len() * antennas;
            SlotGains {
                phase: slot.phase,
                active: slot.active.clone(),
                gains: (0..n).map(|_| complex_normal(rng)).collect(),
            }
        })
        .collect();
    Ok(ChannelSet {
        users,
        antennas,
        slots,
    })
}

/// What the transmitters know after the orthogonal phase: for each
/// transmitter `i` and receiver `j`, an estimate of `h_{j,i}^{(1,i)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsitReport {
    epsilon: f64,
    cee_power: f64,
    /// `[tx][rx]` -> estimate of length M.
    estimates: Vec<Vec<Vec<Complex>>>,
}

impl CsitReport {
    /// Error-free report: every estimate equals the true phase-1 channel.
    pub fn perfect(channels: &ChannelSet) -> Self {
        let k = channels.users();
        let estimates = (0..k)
            .map(|tx| {
                (0..k)
                    .map(|rx| channels.ot_link(rx, tx).expect("complete channel set").to_vec())
                    .collect()
            })
            .collect();
        CsitReport {
            epsilon: 1.0,
            cee_power: 0.0,
            estimates,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Expected squared norm of the estimation error, `P^{-ε}` (zero for a
    /// perfect report).
    pub fn cee_power(&self) -> f64 {
        self.cee_power
    }

    /// Estimate `ĥ_{rx,tx}^{(1,tx)}` held by transmitter `tx`.
    pub fn estimate(&self, rx: usize, tx: usize) -> &[Complex] {
        &self.estimates[tx][rx]
    }
}

/// Corrupts the phase-1 channels with estimation error of power `P^{-ε}`.
///
/// The unit-variance error draws are scaled after sampling, so the same
/// generator state yields the same error directions for every `(ε, P)`.
pub fn corrupt_csit<R: Rng + ?Sized>(
    channels: &ChannelSet,
    epsilon: f64,
    power: f64,
    rng: &mut R,
) -> Result<CsitReport> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidPower(power));
    }
    let k = channels.users();
    let m = channels.antennas();
    let cee_power = power.powf(-epsilon);
    let scale = (cee_power / m as f64).sqrt();

    let mut estimates = Vec::with_capacity(k);
    for tx in 0..k {
        let mut per_rx = Vec::with_capacity(k);
        for rx in 0..k {
            let h = channels
                .ot_link(rx, tx)
                .ok_or_else(|| Error::Shape(format!("missing phase-1 channel {rx}<-{tx}")))?;
            per_rx.push(h.iter().map(|&g| g - complex_normal(rng) * scale).collect());
        }
        estimates.push(per_rx);
    }
    Ok(CsitReport {
        epsilon,
        cee_power,
        estimates,
    })
}
