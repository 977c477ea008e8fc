//! Covariances, achievable rates, DoF estimates and outage statistics.

use crate::protocol::{frob2, ExtendedSystem};
use crate::{CMatrix, Error, Result};

/// Per-user achievable rates of one realization, in bits/s/Hz per channel
/// use (already divided by the slot count).
#[derive(Debug, Clone, PartialEq)]
pub struct RateSample {
    pub per_user_rate: Vec<f64>,
    pub power: f64,
    pub epsilon: f64,
}

impl RateSample {
    /// Rates of every user of an assembled system.
    pub fn from_system(system: &ExtendedSystem, power: f64, epsilon: f64) -> Result<Self> {
        let per_user_rate = (0..system.users())
            .map(|j| {
                let u = system.user(j);
                let cov = noise_interference_cov(&u.filter, &u.interference)?;
                user_rate(&u.equivalent, &cov, system.slots())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RateSample {
            per_user_rate,
            power,
            epsilon,
        })
    }

    pub fn mean(&self) -> f64 {
        self.per_user_rate.iter().sum::<f64>() / self.per_user_rate.len() as f64
    }
}

/// `Υ = U Ξ Ξᴴ Uᴴ + U Uᴴ`.
pub fn noise_interference_cov(filter: &CMatrix, interference: &CMatrix) -> Result<CMatrix> {
    if filter.ncols() != interference.nrows() {
        return Err(Error::Shape(format!(
            "filter is {}x{}, interference is {}x{}",
            filter.nrows(),
            filter.ncols(),
            interference.nrows(),
            interference.ncols()
        )));
    }
    let residual = filter * interference;
    Ok(&residual * residual.adjoint() + filter * filter.adjoint())
}

/// Residual interference energy `‖U_j Ξ_j‖_F²` left after filtering.
pub fn residual_interference_power(system: &ExtendedSystem, j: usize) -> f64 {
    let u = system.user(j);
    frob2(&(&u.filter * &u.interference))
}

fn log2_det_hpd(m: CMatrix, what: &'static str) -> Result<f64> {
    let chol = m.cholesky().ok_or(Error::NotPositiveDefinite(what))?;
    let l = chol.l_dirty();
    let ln: f64 = (0..l.nrows()).map(|i| l[(i, i)].re.ln()).sum();
    Ok(2.0 * ln / std::f64::consts::LN_2)
}

/// `(1/W)·log₂ det(I + Υ⁻¹ H̄ H̄ᴴ)` for unit-covariance symbols, evaluated
/// as `log₂ det(Υ + H̄ H̄ᴴ) − log₂ det Υ`.
pub fn user_rate(equivalent: &CMatrix, upsilon: &CMatrix, slots: usize) -> Result<f64> {
    if !upsilon.is_square() || equivalent.nrows() != upsilon.nrows() {
        return Err(Error::Shape(format!(
            "equivalent channel is {}x{}, covariance is {}x{}",
            equivalent.nrows(),
            equivalent.ncols(),
            upsilon.nrows(),
            upsilon.ncols()
        )));
    }
    if slots == 0 {
        return Err(Error::Shape("zero slots".into()));
    }
    let noise = log2_det_hpd(upsilon.clone(), "interference-plus-noise covariance")?;
    let total = log2_det_hpd(
        upsilon + equivalent * equivalent.adjoint(),
        "received signal covariance",
    )?;
    Ok(((total - noise) / slots as f64).max(0.0))
}

/// Finite-difference DoF estimate `(R(P₂) − R(P₁)) / (log₂P₂ − log₂P₁)`,
/// powers in linear scale.
pub fn dof_slope(power_lo: f64, rate_lo: f64, power_hi: f64, rate_hi: f64) -> Result<f64> {
    if !(power_hi > power_lo && power_lo > 0.0) {
        return Err(Error::SlopeOrder {
            lo: power_lo,
            hi: power_hi,
        });
    }
    Ok((rate_hi - rate_lo) / (power_hi.log2() - power_lo.log2()))
}

/// DoF per user of the three-user scheme, `(1+2ε)/6`.
pub fn theoretical_dof_k3(epsilon: f64) -> f64 {
    (1.0 + 2.0 * epsilon) / 6.0
}

/// Empirical percentile with linear interpolation between order statistics
/// at position `(n−1)·p/100`.
pub fn outage_rate(samples: &[f64], percentile: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(percentile > 0.0 && percentile < 100.0) {
        return Err(Error::PercentileOutOfRange(percentile));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = (sorted.len() - 1) as f64 * percentile / 100.0;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    Ok(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}
