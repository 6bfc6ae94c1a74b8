//! Closed-form sensing performance and throughput of the full-duplex
//! (listen-and-talk) protocol.
//!
//! The test statistic is the average of N = fs*T received powers; by the
//! CLT it is Gaussian under each joint hypothesis with the moments of
//! [`lat_moments`]. While the SU transmits, residual self-interference
//! inflates both the mean and the threshold needed to hold the target
//! miss-detection probability, which is where the two thresholds and the
//! two conditional false-alarm rates come from. Slot-to-slot the SU
//! decision follows a two-state chain per PU state; the steady state of
//! those chains gives the overall error probabilities and the throughput.

use crate::error::{Error, Result};
use crate::params::{JointState, SystemParams};
use crate::stats::{q_inverse, q_raw, MomentPair};

/// Detection thresholds, one per SU activity state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatThresholds {
    /// Threshold applied while the SU is silent.
    pub eps0: f64,
    /// Threshold applied while the SU is transmitting; eps1 >= eps0
    /// whenever there is any residual self-interference.
    pub eps1: f64,
}

/// The four conditional detection-error probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatErrorProbs {
    /// False alarm while silent: P(M > eps0 | PU idle, SU silent).
    pub pf0: f64,
    /// Miss detection while silent: P(M <= eps0 | PU busy, SU silent).
    pub pm0: f64,
    /// False alarm while transmitting.
    pub pf1: f64,
    /// Miss detection while transmitting.
    pub pm1: f64,
}

/// Steady-state occupancies of the two conditional SU-decision chains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// PU idle, SU silent (the overall false-alarm probability).
    pub p00: f64,
    /// PU busy, SU silent.
    pub p01: f64,
    /// PU idle, SU active.
    pub p10: f64,
    /// PU busy, SU active (the overall miss-detection probability).
    pub p11: f64,
}

/// Full closed-form report for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatReport {
    pub thresholds: LatThresholds,
    pub pf0: f64,
    pub pm0: f64,
    pub pf1: f64,
    pub pm1: f64,
    /// Steady-state false alarm p00.
    pub pf_overall: f64,
    /// Steady-state miss detection p11.
    pub pm_overall: f64,
    /// Sum rate log2(1 + gamma_t) in bits/s/Hz.
    pub rate: f64,
    /// rate * (1 - pf_overall).
    pub throughput: f64,
}

/// Mean factor (in units of sigma_u^2) of the received power under a
/// joint state: 1 + gamma_s [PU busy] + gamma_i [SU active].
fn mean_factor(state: JointState, params: &SystemParams) -> f64 {
    let d = params.derived_ratios();
    1.0 + if state.pu_busy { params.gamma_s } else { 0.0 }
        + if state.su_active { d.gamma_i } else { 0.0 }
}

/// Closed-form mean and variance of the full-slot test statistic under
/// one joint hypothesis: mean m*sigma_u^2 and variance (m*sigma_u^2)^2/N.
pub fn lat_moments(state: JointState, params: &SystemParams) -> MomentPair {
    let n = params.n_samples_lat() as f64;
    let mean = mean_factor(state, params) * params.sigma_u2;
    MomentPair {
        mean,
        variance: mean * mean / n,
    }
}

/// The four Gaussian-tail error probabilities at the given thresholds.
pub fn lat_error_probs(thresholds: &LatThresholds, params: &SystemParams) -> LatErrorProbs {
    let sqrt_n = (params.n_samples_lat() as f64).sqrt();
    let su2 = params.sigma_u2;
    let d = params.derived_ratios();
    let gs = params.gamma_s;
    let gi = d.gamma_i;
    let pf = |eps: f64, m: f64| q_raw((eps / (m * su2) - 1.0) * sqrt_n);
    LatErrorProbs {
        pf0: pf(thresholds.eps0, 1.0),
        pm0: 1.0 - pf(thresholds.eps0, 1.0 + gs),
        pf1: pf(thresholds.eps1, 1.0 + gi),
        pm1: 1.0 - pf(thresholds.eps1, 1.0 + gs + gi),
    }
}

/// The threshold that pins the miss-detection probability to `pm` for the
/// given SU activity:
/// eps = (Q^{-1}(1 - pm)/sqrt(N) + 1) * (1 + gamma_s [+ gamma_i]) sigma_u^2.
pub fn threshold_for_pm(pm: f64, su_active: bool, params: &SystemParams) -> Result<f64> {
    if !pm.is_finite() || pm <= 0.0 || pm >= 1.0 {
        return Err(Error::OutOfRange {
            name: "pm",
            value: pm,
            constraint: "0 < pm < 1",
        });
    }
    let sqrt_n = (params.n_samples_lat() as f64).sqrt();
    let q = q_inverse(1.0 - pm)?;
    let d = params.derived_ratios();
    let m = 1.0 + params.gamma_s + if su_active { d.gamma_i } else { 0.0 };
    Ok((q / sqrt_n + 1.0) * m * params.sigma_u2)
}

/// Both thresholds at a common miss-detection target.
pub fn thresholds_for_pm(pm: f64, params: &SystemParams) -> Result<LatThresholds> {
    Ok(LatThresholds {
        eps0: threshold_for_pm(pm, false, params)?,
        eps1: threshold_for_pm(pm, true, params)?,
    })
}

/// False-alarm probability once the threshold is pinned to miss target
/// `pm`, eliminating the threshold:
/// silent: Q(Q^{-1}(1-pm)(1+gamma_s) + gamma_s sqrt(N));
/// active: the same with gamma_s replaced by gamma_s/(1+gamma_i).
pub fn pf_given_pm(pm: f64, su_active: bool, params: &SystemParams) -> Result<f64> {
    if !pm.is_finite() || pm <= 0.0 || pm >= 1.0 {
        return Err(Error::OutOfRange {
            name: "pm",
            value: pm,
            constraint: "0 < pm < 1",
        });
    }
    let sqrt_n = (params.n_samples_lat() as f64).sqrt();
    let q = q_inverse(1.0 - pm)?;
    let d = params.derived_ratios();
    let g = if su_active {
        params.gamma_s / (1.0 + d.gamma_i)
    } else {
        params.gamma_s
    };
    Ok(q_raw(q * (1.0 + g) + g * sqrt_n))
}

/// Steady state of the two conditional decision chains from the four
/// error probabilities:
/// p11 = pm0 / (1 + pm0 - pm1), p00 = pf1 / (1 - pf0 + pf1).
pub fn steady_state(pm0: f64, pm1: f64, pf0: f64, pf1: f64) -> Result<SteadyState> {
    for (name, v) in [("pm0", pm0), ("pm1", pm1), ("pf0", pf0), ("pf1", pf1)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                constraint: "probability in [0, 1]",
            });
        }
    }
    let d_busy = 1.0 + pm0 - pm1;
    if d_busy <= 0.0 {
        return Err(Error::DegenerateChain(format!(
            "busy chain absorbing: pm0 = {pm0}, pm1 = {pm1}"
        )));
    }
    let d_idle = 1.0 - pf0 + pf1;
    if d_idle <= 0.0 {
        return Err(Error::DegenerateChain(format!(
            "idle chain absorbing: pf0 = {pf0}, pf1 = {pf1}"
        )));
    }
    let p11 = pm0 / d_busy;
    let p00 = pf1 / d_idle;
    Ok(SteadyState {
        p00,
        p01: 1.0 - p11,
        p10: 1.0 - p00,
        p11,
    })
}

/// Full closed-form chain at the configured operating point, with the
/// per-state miss targets tied together (pm0 = pm1 = pm_target, which
/// makes the overall miss detection equal the target as well).
pub fn lat_overall(params: &SystemParams) -> Result<LatReport> {
    let pm = params.pm_target;
    let thresholds = thresholds_for_pm(pm, params)?;
    let pf0 = pf_given_pm(pm, false, params)?;
    let pf1 = pf_given_pm(pm, true, params)?;
    let ss = steady_state(pm, pm, pf0, pf1)?;
    let gamma_t = params.derived_ratios().gamma_t;
    let rate = (1.0 + gamma_t).log2();
    Ok(LatReport {
        thresholds,
        pf0,
        pm0: pm,
        pf1,
        pm1: pm,
        pf_overall: ss.p00,
        pm_overall: ss.p11,
        rate,
        throughput: rate * (1.0 - ss.p00),
    })
}

// ===========================================================================
// Tests
// ===========================================================================
