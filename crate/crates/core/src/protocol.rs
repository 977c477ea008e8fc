//! The two-phase RIA transmission protocol.
//!
//! Phase 1 (orthogonal transmission) serves one transmitter per slot with
//! unprecoded symbols so every receiver overhears one linear combination of
//! each interferer. Phase 2 activates every unordered pair of transmitters
//! once; each member of the pair precodes with the delayed estimate of its
//! phase-1 channel towards the partner's receiver, which lines the new
//! interference up with the copy that receiver already holds. The receive
//! filter then subtracts the two copies.

use nalgebra::DMatrix;

use crate::channel::{ChannelSet, CsitReport};
use crate::{CMatrix, Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// One active transmitter per slot.
    Orthogonal,
    /// Pairs of active transmitters, aligned against phase-1 interference.
    Retrospective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub phase: Phase,
    /// Position within its phase.
    pub index: usize,
    /// Active transmitters, ascending.
    pub active: Vec<usize>,
}

/// Slot plan: `K` orthogonal slots followed by the `K(K−1)/2` pair slots in
/// lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    users: usize,
    slots: Vec<Slot>,
    w1: usize,
    w2: usize,
}

impl Schedule {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Slots in the orthogonal phase.
    pub fn w1(&self) -> usize {
        self.w1
    }

    /// Slots in the retrospective phase.
    pub fn w2(&self) -> usize {
        self.w2
    }

    /// Total slot count `W`.
    pub fn total(&self) -> usize {
        self.w1 + self.w2
    }

    /// Global index of the orthogonal slot of transmitter `tx`.
    pub fn ot_slot(&self, tx: usize) -> usize {
        debug_assert!(tx < self.users);
        tx
    }

    /// Global index of the phase-2 slot shared by `a` and `b`.
    pub fn pair_slot(&self, a: usize, b: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        debug_assert!(lo != hi && hi < self.users);
        let k = self.users;
        // pairs (0,1),(0,2),..,(0,k-1),(1,2),..
        let before: usize = (0..lo).map(|r| k - 1 - r).sum();
        self.w1 + before + (hi - lo - 1)
    }
}

pub fn build_schedule(users: usize) -> Result<Schedule> {
    if users < 2 {
        return Err(Error::TooFewUsers(users));
    }
    let mut slots: Vec<Slot> = (0..users)
        .map(|s| Slot {
            phase: Phase::Orthogonal,
            index: s,
            active: vec![s],
        })
        .collect();
    let mut index = 0;
    for a in 0..users {
        for b in a + 1..users {
            slots.push(Slot {
                phase: Phase::Retrospective,
                index,
                active: vec![a, b],
            });
            index += 1;
        }
    }
    Ok(Schedule {
        users,
        w1: users,
        w2: index,
        slots,
    })
}

/// Phase-1 precoder `√(P/K)·I`, padded with zero rows for switched-off
/// antennas when `M > K`.
pub fn ot_precoder(users: usize, antennas: usize, power: f64) -> Result<CMatrix> {
    if antennas < users {
        return Err(Error::TooFewAntennas { users, antennas });
    }
    let mut v = CMatrix::zeros(antennas, users);
    let amp = Complex::from((power / users as f64).sqrt());
    for d in 0..users {
        v[(d, d)] = amp;
    }
    Ok(v)
}

fn row_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalizing scalar `σ = √P / ‖ĥ‖` of the retrospective precoder.
fn ria_scale(hhat: &[Complex], power: f64) -> Result<f64> {
    let n = row_norm(hhat);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::DegenerateEstimate);
    }
    Ok(power.sqrt() / n)
}

/// Phase-2 precoder `σ·e₁·ĥ` (shape `M × b`, `b = ĥ.len()`): transmits
/// `ĥ x` from the first antenna only. Rank one with `‖V‖_F² = P`.
pub fn ria_precoder(hhat: &[Complex], antennas: usize, power: f64) -> Result<CMatrix> {
    if antennas == 0 || hhat.is_empty() {
        return Err(Error::Shape("empty precoder".into()));
    }
    let sigma = ria_scale(hhat, power)?;
    let mut v = CMatrix::zeros(antennas, hhat.len());
    for (c, &z) in hhat.iter().enumerate() {
        v[(0, c)] = z * sigma;
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
struct Precoder {
    matrix: CMatrix,
    /// `√(P/K)` for orthogonal slots, `σ` for retrospective ones.
    scale: f64,
}

/// All per-slot precoders `V_i^{(p,s)}` of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    users: usize,
    antennas: usize,
    power: f64,
    /// `[tx][slot]`, `None` when `tx` is silent.
    entries: Vec<Vec<Option<Precoder>>>,
}

impl PrecoderSet {
    /// Builds every precoder from the transmitters' delayed estimates.
    pub fn build(schedule: &Schedule, csit: &CsitReport, antennas: usize, power: f64) -> Result<Self> {
        let k = schedule.users();
        if antennas < k {
            return Err(Error::TooFewAntennas { users: k, antennas });
        }
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidPower(power));
        }
        let ot = ot_precoder(k, antennas, power)?;
        let ot_scale = (power / k as f64).sqrt();
        let mut entries = vec![vec![None; schedule.total()]; k];
        for (s, slot) in schedule.slots().iter().enumerate() {
            match slot.phase {
                Phase::Orthogonal => {
                    let tx = slot.active[0];
                    entries[tx][s] = Some(Precoder {
                        matrix: ot.clone(),
                        scale: ot_scale,
                    });
                }
                Phase::Retrospective => {
                    let (a, b) = (slot.active[0], slot.active[1]);
                    for (tx, partner) in [(a, b), (b, a)] {
                        // only the first K antennas are in use
                        let hhat = &csit.estimate(partner, tx)[..k];
                        entries[tx][s] = Some(Precoder {
                            matrix: ria_precoder(hhat, antennas, power)?,
                            scale: ria_scale(hhat, power)?,
                        });
                    }
                }
            }
        }
        Ok(PrecoderSet {
            users: k,
            antennas,
            power,
            entries,
        })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Symbols per user, `b = K`.
    pub fn symbols(&self) -> usize {
        self.users
    }

    pub fn get(&self, tx: usize, slot: usize) -> Option<&CMatrix> {
        self.entries[tx][slot].as_ref().map(|p| &p.matrix)
    }

    pub fn scale(&self, tx: usize, slot: usize) -> Option<f64> {
        self.entries[tx][slot].as_ref().map(|p| p.scale)
    }

    /// Iterates `(tx, slot, V)` over every active precoder.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &CMatrix)> {
        self.entries.iter().enumerate().flat_map(|(tx, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(s, p)| p.as_ref().map(|p| (tx, s, &p.matrix)))
        })
    }

    /// Global precoder `V_i` (`MW × b`): the per-slot precoders stacked,
    /// zero blocks where `tx` is silent.
    pub fn stacked(&self, tx: usize) -> CMatrix {
        let m = self.antennas;
        let slots = self.entries[tx].len();
        let mut v = CMatrix::zeros(m * slots, self.symbols());
        for (s, p) in self.entries[tx].iter().enumerate() {
            if let Some(p) = p {
                v.view_mut((s * m, 0), (m, self.symbols())).copy_from(&p.matrix);
            }
        }
        v
    }
}

/// Per-receiver slice of the stacked system.
#[derive(Debug, Clone, PartialEq)]
pub struct UserSystem {
    /// `Ξ_j`, `W × (K−1)b`: received interference, one block column per
    /// interferer in ascending order.
    pub interference: CMatrix,
    /// `U_j`, `b × W`.
    pub filter: CMatrix,
    /// `U_j H_{j,j} V_j`, `b × b`.
    pub equivalent: CMatrix,
}

/// Stacked model `r_j = U_j(Σ_i H_{j,i} V_i x_i + n_j)` for every receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSystem {
    users: usize,
    slots: usize,
    /// `[rx * K + tx]`, each `W × MW` block diagonal.
    blocks: Vec<CMatrix>,
    precoders: PrecoderSet,
    stacked: Vec<CMatrix>,
    per_user: Vec<UserSystem>,
    degenerate_rows: usize,
}

impl ExtendedSystem {
    pub fn users(&self) -> usize {
        self.users
    }

    /// Total slot count `W`.
    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn symbols(&self) -> usize {
        self.precoders.symbols()
    }

    /// `H_{rx,tx}`.
    pub fn block(&self, rx: usize, tx: usize) -> &CMatrix {
        &self.blocks[rx * self.users + tx]
    }

    /// `V_tx`.
    pub fn stacked_precoder(&self, tx: usize) -> &CMatrix {
        &self.stacked[tx]
    }

    pub fn precoders(&self) -> &PrecoderSet {
        &self.precoders
    }

    pub fn user(&self, j: usize) -> &UserSystem {
        &self.per_user[j]
    }

    /// Cancellation rows whose phase-2 first-antenna gain was exactly zero.
    pub fn degenerate_rows(&self) -> usize {
        self.degenerate_rows
    }
}

fn block_channel(channels: &ChannelSet, rx: usize, tx: usize) -> CMatrix {
    let m = channels.antennas();
    let w = channels.num_slots();
    let mut h = CMatrix::zeros(w, m * w);
    for s in 0..w {
        if let Some(g) = channels.link(rx, tx, s) {
            for (a, &z) in g.iter().enumerate() {
                h[(s, s * m + a)] = z;
            }
        }
    }
    h
}

/// Receive filter `U_j` (`b × W`).
///
/// Row 0 keeps the user's own orthogonal slot. For each interferer `β`
/// (ascending) one row combines the orthogonal slot of `β` with weight `g`
/// and the pair slot `{j, β}` with weight `−c`, where `c = 1/√K` is the
/// phase-1 interference coefficient and `g = σ·h_{j,β}^{(2,s)}[0]/√P` the
/// phase-2 one, so that the two aligned copies cancel. Pair slots not
/// involving `j` get zero weight.
pub fn receive_filter(
    j: usize,
    precoders: &PrecoderSet,
    channels: &ChannelSet,
    schedule: &Schedule,
) -> Result<CMatrix> {
    let k = schedule.users();
    if j >= k {
        return Err(Error::Shape(format!("user {j} out of range for K = {k}")));
    }
    let sqrt_p = precoders.power().sqrt();
    let mut u = CMatrix::zeros(k, schedule.total());
    u[(0, schedule.ot_slot(j))] = Complex::from(1.0);

    for (row, beta) in (0..k).filter(|&b| b != j).enumerate() {
        let ot = schedule.ot_slot(beta);
        let pair = schedule.pair_slot(j, beta);
        let c = precoders
            .scale(beta, ot)
            .ok_or_else(|| Error::Shape(format!("no phase-1 precoder for {beta}")))?
            / sqrt_p;
        let sigma = precoders
            .scale(beta, pair)
            .ok_or_else(|| Error::Shape(format!("no phase-2 precoder for {beta}")))?;
        let h_first = channels
            .link(j, beta, pair)
            .ok_or_else(|| Error::Shape(format!("missing channel {j}<-{beta} in slot {pair}")))?[0];
        let g = h_first * (sigma / sqrt_p);
        u[(row + 1, ot)] = g;
        u[(row + 1, pair)] = Complex::from(-c);
    }
    Ok(u)
}

/// Builds precoders, block channels, interference matrices, receive
/// filters and equivalent channels for every user.
pub fn assemble_extended(
    channels: &ChannelSet,
    csit: &CsitReport,
    schedule: &Schedule,
    power: f64,
) -> Result<ExtendedSystem> {
    let k = schedule.users();
    if channels.users() != k || channels.num_slots() != schedule.total() {
        return Err(Error::Shape(format!(
            "channel set ({} users, {} slots) does not match schedule ({k} users, {} slots)",
            channels.users(),
            channels.num_slots(),
            schedule.total()
        )));
    }
    let precoders = PrecoderSet::build(schedule, csit, channels.antennas(), power)?;
    let b = precoders.symbols();
    let w = schedule.total();

    let mut blocks = Vec::with_capacity(k * k);
    for rx in 0..k {
        for tx in 0..k {
            blocks.push(block_channel(channels, rx, tx));
        }
    }
    let stacked: Vec<CMatrix> = (0..k).map(|tx| precoders.stacked(tx)).collect();

    let mut degenerate_rows = 0;
    let mut per_user = Vec::with_capacity(k);
    for j in 0..k {
        let mut xi = CMatrix::zeros(w, (k - 1) * b);
        for (col, i) in (0..k).filter(|&i| i != j).enumerate() {
            let hv = &blocks[j * k + i] * &stacked[i];
            xi.view_mut((0, col * b), (w, b)).copy_from(&hv);
        }
        let filter = receive_filter(j, &precoders, channels, schedule)?;
        degenerate_rows += (0..k)
            .filter(|&beta| beta != j)
            .filter(|&beta| {
                channels
                    .link(j, beta, schedule.pair_slot(j, beta))
                    .is_some_and(|h| h[0] == Complex::from(0.0))
            })
            .count();
        let equivalent = &filter * &blocks[j * k + j] * &stacked[j];
        per_user.push(UserSystem {
            interference: xi,
            filter,
            equivalent,
        });
    }

    Ok(ExtendedSystem {
        users: k,
        slots: w,
        blocks,
        precoders,
        stacked,
        per_user,
        degenerate_rows,
    })
}

/// Squared Frobenius norm.
pub(crate) fn frob2(m: &DMatrix<Complex>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}
