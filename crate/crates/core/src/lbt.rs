//! Closed-form sensing and throughput of the half-duplex
//! (listen-before-talk) baseline.
//!
//! Sensing uses both antennas for fs*tau samples per slot; transmission
//! uses 2x2 spatial multiplexing over the remaining T - tau with the
//! per-slot energy budget packed into the shorter window. The miss-
//! detection side of the detector admits two closed forms that differ in
//! whether the slope carries sqrt(xi) or xi, where
//! xi = [(beta_s gamma_s)^2 + (gamma_s + 1)^2] / 2:
//! the sqrt(xi) form is the one consistent with the statistic's variance
//! (and the one the slot simulator reproduces); the xi form is kept as
//! [`Variant::Literal`] for comparison against curves produced with it.
//! The choice is always explicit, never silent.

use crate::channel::gen_mimo_channel;
use crate::error::{Error, Result};
use crate::params::{JointState, SystemParams};
use crate::stats::{q_inverse, q_raw, stream, MomentPair};
use rayon::prelude::*;

/// Which miss-detection slope the threshold inversion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Slope sqrt(xi): consistent with the variance of the two-antenna
    /// statistic. The default.
    #[default]
    Consistent,
    /// Slope xi taken at face value from the alternative closed form.
    Literal,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Consistent => "consistent",
            Variant::Literal => "literal",
        }
    }
}

/// Closed-form + Monte-Carlo report for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbtReport {
    pub pf: f64,
    pub pm: f64,
    pub threshold: f64,
    /// Monte-Carlo expectation of the exact log-det rate, bits/s/Hz.
    pub rate_exact: f64,
    /// Standard error of `rate_exact`.
    pub rate_exact_se: f64,
    /// High-SNR approximation of the rate.
    pub rate_approx: f64,
    /// rate_exact * (1 - pf).
    pub throughput: f64,
}

/// xi = [(beta_s gamma_s)^2 + (gamma_s + 1)^2] / 2.
pub fn xi_factor(params: &SystemParams) -> f64 {
    let bg = params.beta_s * params.gamma_s;
    let g1 = params.gamma_s + 1.0;
    (bg * bg + g1 * g1) / 2.0
}

/// Closed-form moments of the two-antenna statistic over fs*tau samples:
/// idle (sigma_u^2, sigma_u^4/N); busy ((1+gamma_s) sigma_u^2, xi sigma_u^4/N).
pub fn lbt_moments(state: JointState, params: &SystemParams) -> MomentPair {
    let n = params.n_samples_lbt() as f64;
    let su2 = params.sigma_u2;
    if state.pu_busy {
        MomentPair {
            mean: (params.gamma_s + 1.0) * su2,
            variance: xi_factor(params) * su2 * su2 / n,
        }
    } else {
        MomentPair {
            mean: su2,
            variance: su2 * su2 / n,
        }
    }
}

/// (pf, pm) at a given threshold, using the statistic's actual variance
/// on the busy side.
pub fn lbt_error_probs(threshold: f64, params: &SystemParams) -> (f64, f64) {
    let sqrt_n = (params.n_samples_lbt() as f64).sqrt();
    let su2 = params.sigma_u2;
    let pf = q_raw((threshold / su2 - 1.0) * sqrt_n);
    let sd_busy = xi_factor(params).sqrt() * su2 / sqrt_n;
    let pm = 1.0 - q_raw((threshold - (params.gamma_s + 1.0) * su2) / sd_busy);
    (pf, pm)
}

/// Threshold pinning the miss-detection probability to `pm` for a sensing
/// subslot of length `tau`, under either slope variant.
pub fn lbt_threshold_for_pm(
    pm: f64,
    tau: f64,
    params: &SystemParams,
    variant: Variant,
) -> Result<f64> {
    if !pm.is_finite() || pm <= 0.0 || pm >= 1.0 {
        return Err(Error::OutOfRange {
            name: "pm",
            value: pm,
            constraint: "0 < pm < 1",
        });
    }
    if tau <= 0.0 || tau >= params.slot_t {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            constraint: "0 < tau < slot_t",
        });
    }
    let sqrt_n = (params.n_samples_lbt_for(tau) as f64).sqrt();
    let xi = xi_factor(params);
    let slope = match variant {
        Variant::Consistent => xi.sqrt(),
        Variant::Literal => xi,
    };
    let q = q_inverse(1.0 - pm)?;
    let su2 = params.sigma_u2;
    Ok((params.gamma_s + 1.0) * su2 + q * slope * su2 / sqrt_n)
}

/// False alarm once the threshold is pinned to miss target `pm`:
/// Q(Q^{-1}(1 - pm) * slope + gamma_s sqrt(fs tau)) with slope sqrt(xi)
/// (consistent) or xi (literal).
pub fn lbt_pf_given_pm(pm: f64, tau: f64, params: &SystemParams, variant: Variant) -> Result<f64> {
    let threshold = lbt_threshold_for_pm(pm, tau, params, variant)?;
    let sqrt_n = (params.n_samples_lbt_for(tau) as f64).sqrt();
    Ok(q_raw((threshold / params.sigma_u2 - 1.0) * sqrt_n))
}

/// Per-antenna transmit power when the slot energy budget sigma_s^2 * T
/// is split over two antennas in the T - tau transmission window.
pub fn per_antenna_power(params: &SystemParams) -> Result<f64> {
    per_antenna_power_for(params.sigma_s2, params.slot_t, params.tau)
}

/// Same, with an explicit (sigma_s^2, T, tau) triple.
pub fn per_antenna_power_for(sigma_s2: f64, slot_t: f64, tau: f64) -> Result<f64> {
    if !(0.0..slot_t).contains(&tau) {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            constraint: "0 <= tau < slot_t",
        });
    }
    Ok(sigma_s2 / 2.0 * slot_t / (slot_t - tau))
}

/// Monte-Carlo rate estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub draws: usize,
    pub seed: u64,
}

/// Default number of channel draws for the exact rate.
pub const DEFAULT_RATE_DRAWS: usize = 100_000;

const RATE_BLOCK: usize = 8192;

/// Stream-id base for rate Monte Carlo, so different consumers of one
/// master seed never share a stream.
const RATE_STREAM_BASE: u64 = 1 << 40;

/// Exact ergodic rate E[log2 det(I + (P_each/sigma_u^2) H H^H)] by Monte
/// Carlo over the Kronecker-correlated channel.
///
/// Draws are partitioned into fixed-size blocks, one independent stream
/// per block, and block sums are reduced in block order — the result
/// depends only on (params, draws, seed), not on the number of worker
/// threads.
pub fn ergodic_rate_mc(params: &SystemParams, draws: usize, seed: u64) -> Result<RateEstimate> {
    if draws < 1 {
        return Err(Error::OutOfRange {
            name: "draws",
            value: draws as f64,
            constraint: "draws >= 1",
        });
    }
    let rho = per_antenna_power(params)? / params.sigma_u2;
    let blocks = draws.div_ceil(RATE_BLOCK);
    let partials: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, RATE_STREAM_BASE + b as u64);
            let lo = b * RATE_BLOCK;
            let hi = ((b + 1) * RATE_BLOCK).min(draws);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in lo..hi {
                let r = gen_mimo_channel(params, &mut rng).log2_det_i_plus_gram(rho);
                sum += r;
                sumsq += r * r;
            }
            (sum, sumsq)
        })
        .collect();
    let (sum, sumsq) = partials
        .iter()
        .fold((0.0, 0.0), |(s, q), (bs, bq)| (s + bs, q + bq));
    let n = draws as f64;
    let mean = sum / n;
    let var = if draws > 1 {
        ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(RateEstimate {
        mean,
        std_error: (var / n).sqrt(),
        draws,
        seed,
    })
}

/// High-SNR closed-form rate:
/// 2 log2(T/(2(T - tau))) + 2 log2(gamma_t) + log2(1 - beta_t^2)
/// + log2(1 - beta_r^2).
///
/// Implemented verbatim; it drops the (negative) expected log-determinant
/// of the unit-variance channel, so it sits slightly above the exact rate
/// at high SNR.
pub fn rate_high_snr(params: &SystemParams) -> f64 {
    let t = params.slot_t;
    let gamma_t = params.derived_ratios().gamma_t;
    2.0 * (t / (2.0 * (t - params.tau))).log2()
        + 2.0 * gamma_t.log2()
        + (1.0 - params.beta_t * params.beta_t).log2()
        + (1.0 - params.beta_r * params.beta_r).log2()
}

/// Full report at the configured operating point: threshold and false
/// alarm from the chosen variant at pm_target, exact Monte-Carlo rate,
/// and the high-SNR approximation alongside.
pub fn lbt_overall(
    params: &SystemParams,
    variant: Variant,
    draws: usize,
    seed: u64,
) -> Result<LbtReport> {
    let pm = params.pm_target;
    let threshold = lbt_threshold_for_pm(pm, params.tau, params, variant)?;
    let pf = lbt_pf_given_pm(pm, params.tau, params, variant)?;
    let rate = ergodic_rate_mc(params, draws, seed)?;
    Ok(LbtReport {
        pf,
        pm,
        threshold,
        rate_exact: rate.mean,
        rate_exact_se: rate.std_error,
        rate_approx: rate_high_snr(params),
        throughput: rate.mean * (1.0 - pf),
    })
}

// ===========================================================================
// Tests
// ===========================================================================
