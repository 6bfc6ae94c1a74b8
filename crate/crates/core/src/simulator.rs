//! Slot-level Monte-Carlo engine.
//!
//! Runs the actual decision loops on generated samples — the full-duplex
//! protocol's one-slot-lagged decision chain and the half-duplex
//! sense-then-transmit cycle — and reports empirical occupancies, error
//! frequencies, and throughput with 3-sigma binomial half-widths. These
//! runs are the independent oracle for every closed form in [`crate::lat`]
//! and [`crate::lbt`].
//!
//! The PU state is held constant per epoch and the two conditional chains
//! are simulated separately; PU holding-time distributions are out of
//! scope. Epochs are independent given split RNG streams and run in
//! parallel; within an epoch, slots are strictly sequential because the
//! decision applied in slot t+1 is a function of slot t's statistic only.
//!
//! LAT throughput credits log2(1 + gamma_t) for every idle-epoch slot in
//! which the SU transmits; collision slots (busy epoch, SU transmitting)
//! contribute zero. LBT throughput draws a 2x2 channel per transmitting
//! slot and scales by the (T - tau)/T transmit-time fraction, so it is the
//! slot-time average of what the link actually delivers.

use crate::channel::{gen_mimo_channel, lat_statistic, lbt_statistic};
use crate::error::{Error, Result};
use crate::lat::{lat_moments, thresholds_for_pm, LatThresholds};
use crate::lbt::{lbt_moments, lbt_threshold_for_pm, per_antenna_power, Variant};
use crate::params::{JointState, SystemParams};
use crate::stats::{moment_estimate, stream, MomentPair};
use rand::Rng;
use rayon::prelude::*;

/// Which protocol a simulator entry point exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Lat,
    Lbt,
}

/// Monte-Carlo run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Slots per PU-state epoch.
    pub n_slots: usize,
    /// Epochs per PU state.
    pub n_epochs: usize,
    /// Slots discarded at the start of each epoch.
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_slots: 20_000,
            n_epochs: 5,
            burn_in: 100,
            seed: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_slots < 1 {
            return Err(Error::OutOfRange {
                name: "n_slots",
                value: self.n_slots as f64,
                constraint: "n_slots >= 1",
            });
        }
        if self.n_epochs < 1 {
            return Err(Error::OutOfRange {
                name: "n_epochs",
                value: self.n_epochs as f64,
                constraint: "n_epochs >= 1",
            });
        }
        if self.burn_in >= self.n_slots {
            return Err(Error::OutOfRange {
                name: "burn_in",
                value: self.burn_in as f64,
                constraint: "burn_in < n_slots",
            });
        }
        Ok(())
    }
}

/// Empirical counterparts of the steady-state occupancies, per-decision
/// error rates, and throughput, with 3-sigma binomial half-widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalReport {
    /// Occupancy of (PU idle, SU silent) among idle-epoch slots.
    pub p00_hat: f64,
    /// Occupancy of (PU busy, SU silent) among busy-epoch slots.
    pub p01_hat: f64,
    /// Occupancy of (PU idle, SU active) among idle-epoch slots.
    pub p10_hat: f64,
    /// Occupancy of (PU busy, SU active) among busy-epoch slots.
    pub p11_hat: f64,
    /// Per-decision false-alarm frequency (idle epochs).
    pub pf_hat: f64,
    /// Per-decision miss frequency (busy epochs).
    pub pm_hat: f64,
    /// Slot-averaged delivered throughput, bits/s/Hz, over idle epochs.
    pub throughput_hat: f64,
    pub idle_slots: u64,
    pub busy_slots: u64,
    pub ci3_p00: f64,
    pub ci3_p11: f64,
    pub ci3_pf: f64,
    pub ci3_pm: f64,
    pub ci3_throughput: f64,
}

fn ci3(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

// ---------------------------------------------------------------------------
// Stream-id partitioning
// ---------------------------------------------------------------------------

const LAT_STREAM_BASE: u64 = 0;
const LBT_STREAM_BASE: u64 = 1 << 41;
const VERIFY_STREAM_BASE: u64 = 1 << 42;
const ROC_STREAM_BASE: u64 = 1 << 43;
const COLLECT_STREAM_BASE: u64 = 1 << 44;

// ---------------------------------------------------------------------------
// Full-duplex decision chain
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct EpochCounts {
    slots: u64,
    su_active: u64,
    errors: u64,
    rate_sum: f64,
    rate_sumsq: f64,
}

impl EpochCounts {
    fn merge(mut self, o: &EpochCounts) -> EpochCounts {
        self.slots += o.slots;
        self.su_active += o.su_active;
        self.errors += o.errors;
        self.rate_sum += o.rate_sum;
        self.rate_sumsq += o.rate_sumsq;
        self
    }
}

/// One epoch of the LAT chain: sense every slot with the threshold picked
/// by the current SU activity, apply the decision to the next slot.
pub(crate) fn lat_epoch<R: Rng + ?Sized>(
    params: &SystemParams,
    thresholds: &LatThresholds,
    pu_busy: bool,
    n_slots: usize,
    burn_in: usize,
    initial_active: bool,
    rng: &mut R,
) -> EpochCounts {
    let n_samples = params.n_samples_lat();
    let mut su_active = initial_active;
    let mut c = EpochCounts::default();
    for slot in 0..n_slots {
        let state = JointState { pu_busy, su_active };
        let m = lat_statistic(state, params, n_samples, rng);
        let threshold = if su_active {
            thresholds.eps1
        } else {
            thresholds.eps0
        };
        let declared_busy = m > threshold;
        if slot >= burn_in {
            c.slots += 1;
            if su_active {
                c.su_active += 1;
            }
            if pu_busy != declared_busy {
                c.errors += 1;
            }
        }
        su_active = !declared_busy;
    }
    c
}

/// Run the full-duplex decision chains under both PU states.
pub fn run_lat(params: &SystemParams, sim: &SimConfig) -> Result<EmpiricalReport> {
    params.validate()?;
    sim.validate()?;
    let thresholds = thresholds_for_pm(params.pm_target, params)?;

    let per_epoch: Vec<(bool, EpochCounts)> = (0..2 * sim.n_epochs)
        .into_par_iter()
        .map(|k| {
            let pu_busy = k % 2 == 1;
            let mut rng = stream(sim.seed, LAT_STREAM_BASE + k as u64);
            (
                pu_busy,
                lat_epoch(
                    params,
                    &thresholds,
                    pu_busy,
                    sim.n_slots,
                    sim.burn_in,
                    false,
                    &mut rng,
                ),
            )
        })
        .collect();

    let busy = per_epoch
        .iter()
        .filter(|(b, _)| *b)
        .fold(EpochCounts::default(), |acc, (_, c)| acc.merge(c));
    let idle = per_epoch
        .iter()
        .filter(|(b, _)| !*b)
        .fold(EpochCounts::default(), |acc, (_, c)| acc.merge(c));

    let p11 = busy.su_active as f64 / busy.slots as f64;
    let p10 = idle.su_active as f64 / idle.slots as f64;
    let pf = idle.errors as f64 / idle.slots as f64;
    let pm = busy.errors as f64 / busy.slots as f64;
    let rate = (1.0 + params.derived_ratios().gamma_t).log2();
    Ok(EmpiricalReport {
        p00_hat: 1.0 - p10,
        p01_hat: 1.0 - p11,
        p10_hat: p10,
        p11_hat: p11,
        pf_hat: pf,
        pm_hat: pm,
        throughput_hat: rate * p10,
        idle_slots: idle.slots,
        busy_slots: busy.slots,
        ci3_p00: ci3(p10, idle.slots),
        ci3_p11: ci3(p11, busy.slots),
        ci3_pf: ci3(pf, idle.slots),
        ci3_pm: ci3(pm, busy.slots),
        ci3_throughput: rate * ci3(p10, idle.slots),
    })
}

// ---------------------------------------------------------------------------
// Half-duplex sense-then-transmit cycle
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn lbt_epoch<R: Rng + ?Sized>(
    params: &SystemParams,
    threshold: f64,
    rho: f64,
    duty: f64,
    pu_busy: bool,
    n_slots: usize,
    burn_in: usize,
    rng: &mut R,
) -> EpochCounts {
    let n_samples = params.n_samples_lbt();
    let mut c = EpochCounts::default();
    for slot in 0..n_slots {
        let m = lbt_statistic(pu_busy, params, n_samples, rng);
        let declared_busy = m > threshold;
        if slot < burn_in {
            continue;
        }
        c.slots += 1;
        if pu_busy {
            if !declared_busy {
                // missed detection; the SU transmits into the PU
                c.errors += 1;
                c.su_active += 1;
            }
        } else if declared_busy {
            c.errors += 1;
        } else {
            c.su_active += 1;
            let r = duty * gen_mimo_channel(params, rng).log2_det_i_plus_gram(rho);
            c.rate_sum += r;
            c.rate_sumsq += r * r;
        }
    }
    c
}

/// Run the half-duplex sense-then-transmit cycle under both PU states.
/// The threshold comes from inverting the miss-detection target under the
/// chosen slope variant.
pub fn run_lbt(
    params: &SystemParams,
    sim: &SimConfig,
    variant: Variant,
) -> Result<EmpiricalReport> {
    params.validate()?;
    sim.validate()?;
    let threshold = lbt_threshold_for_pm(params.pm_target, params.tau, params, variant)?;
    let rho = per_antenna_power(params)? / params.sigma_u2;
    let duty = (params.slot_t - params.tau) / params.slot_t;

    let per_epoch: Vec<(bool, EpochCounts)> = (0..2 * sim.n_epochs)
        .into_par_iter()
        .map(|k| {
            let pu_busy = k % 2 == 1;
            let mut rng = stream(sim.seed, LBT_STREAM_BASE + k as u64);
            (
                pu_busy,
                lbt_epoch(
                    params,
                    threshold,
                    rho,
                    duty,
                    pu_busy,
                    sim.n_slots,
                    sim.burn_in,
                    &mut rng,
                ),
            )
        })
        .collect();

    let busy = per_epoch
        .iter()
        .filter(|(b, _)| *b)
        .fold(EpochCounts::default(), |acc, (_, c)| acc.merge(c));
    let idle = per_epoch
        .iter()
        .filter(|(b, _)| !*b)
        .fold(EpochCounts::default(), |acc, (_, c)| acc.merge(c));

    let n_idle = idle.slots as f64;
    let pf = idle.errors as f64 / n_idle;
    let pm = busy.errors as f64 / busy.slots as f64;
    let tput = idle.rate_sum / n_idle;
    // empirical sd of the per-idle-slot delivered rate (zero when silent)
    let tput_var = (idle.rate_sumsq / n_idle - tput * tput).max(0.0);
    Ok(EmpiricalReport {
        p00_hat: pf,
        p01_hat: 1.0 - pm,
        p10_hat: 1.0 - pf,
        p11_hat: pm,
        pf_hat: pf,
        pm_hat: pm,
        throughput_hat: tput,
        idle_slots: idle.slots,
        busy_slots: busy.slots,
        ci3_p00: ci3(pf, idle.slots),
        ci3_p11: ci3(pm, busy.slots),
        ci3_pf: ci3(pf, idle.slots),
        ci3_pm: ci3(pm, busy.slots),
        ci3_throughput: 3.0 * (tput_var / n_idle).sqrt(),
    })
}

// ---------------------------------------------------------------------------
// Moment verification
// ---------------------------------------------------------------------------

/// Result of comparing empirical statistic moments to their closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub expected: MomentPair,
    pub measured: MomentPair,
    /// 3 sigma of the sample-mean estimator.
    pub mean_tol3: f64,
    /// 3 sigma of the sample-variance estimator (via the empirical fourth
    /// central moment).
    pub var_tol3: f64,
    pub mean_ok: bool,
    pub var_ok: bool,
}

impl MomentCheck {
    pub fn passed(&self) -> bool {
        self.mean_ok && self.var_ok
    }
}

/// Build `n` independent test statistics under one hypothesis and compare
/// their sample moments against the closed forms, within 3 sigma of the
/// estimators' own sampling error.
pub fn verify_moments(
    protocol: Protocol,
    state: JointState,
    params: &SystemParams,
    n: usize,
    seed: u64,
) -> Result<MomentCheck> {
    params.validate()?;
    if n < 10_000 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            constraint: "n >= 10^4",
        });
    }
    let stats = statistics(protocol, state, params, n, seed, VERIFY_STREAM_BASE);
    let measured = moment_estimate(&stats)?;
    let nf = n as f64;
    let m4 = stats
        .iter()
        .map(|x| {
            let d = x - measured.mean;
            d * d * d * d
        })
        .sum::<f64>()
        / nf;
    let mean_tol3 = 3.0 * (measured.variance / nf).sqrt();
    let var_tol3 = 3.0 * ((m4 - measured.variance * measured.variance).max(0.0) / nf).sqrt();
    let expected = match protocol {
        Protocol::Lat => lat_moments(state, params),
        Protocol::Lbt => lbt_moments(state, params),
    };
    Ok(MomentCheck {
        expected,
        measured,
        mean_tol3,
        var_tol3,
        mean_ok: (measured.mean - expected.mean).abs() <= mean_tol3,
        var_ok: (measured.variance - expected.variance).abs() <= var_tol3,
    })
}

/// `n` independent decision statistics under one hypothesis, computed in
/// fixed-size blocks with one stream per block (thread-count independent).
pub fn collect_statistics(
    protocol: Protocol,
    state: JointState,
    params: &SystemParams,
    n: usize,
    seed: u64,
) -> Vec<f64> {
    statistics(protocol, state, params, n, seed, COLLECT_STREAM_BASE)
}

fn statistics(
    protocol: Protocol,
    state: JointState,
    params: &SystemParams,
    n: usize,
    seed: u64,
    stream_base: u64,
) -> Vec<f64> {
    const BLOCK: usize = 2048;
    let n_samples = match protocol {
        Protocol::Lat => params.n_samples_lat(),
        Protocol::Lbt => params.n_samples_lbt(),
    };
    let blocks = n.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = stream(seed, stream_base + b as u64);
            let count = ((b + 1) * BLOCK).min(n) - b * BLOCK;
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(match protocol {
                    Protocol::Lat => lat_statistic(state, params, n_samples, &mut rng),
                    Protocol::Lbt => lbt_statistic(state.pu_busy, params, n_samples, &mut rng),
                });
            }
            out
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Empirical ROC
// ---------------------------------------------------------------------------

/// One empirical operating point of the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub pf_hat: f64,
    pub pm_hat: f64,
}

/// Empirical (pf, pm) across a threshold grid.
///
/// For the full-duplex protocol `su_active` selects which conditional pair
/// of hypotheses the detector faces (silent: idle/busy while quiet;
/// active: the same with self-interference); the half-duplex protocol
/// ignores it. One common set of statistics is reused across the whole
/// grid, so pf is exactly non-increasing and pm exactly non-decreasing
/// along an ascending grid.
pub fn empirical_roc(
    protocol: Protocol,
    su_active: bool,
    params: &SystemParams,
    thresholds: &[f64],
    n_per_point: usize,
    seed: u64,
) -> Result<Vec<RocPoint>> {
    params.validate()?;
    if thresholds.is_empty() {
        return Err(Error::OutOfRange {
            name: "thresholds",
            value: 0.0,
            constraint: "non-empty ascending grid",
        });
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::OutOfRange {
            name: "thresholds",
            value: f64::NAN,
            constraint: "sorted ascending",
        });
    }
    let su = su_active && protocol == Protocol::Lat;
    let idle = JointState {
        pu_busy: false,
        su_active: su,
    };
    let busy = JointState {
        pu_busy: true,
        su_active: su,
    };
    let blocks = n_per_point.div_ceil(2048) as u64;
    let mut h0 = statistics(protocol, idle, params, n_per_point, seed, ROC_STREAM_BASE);
    let mut h1 = statistics(
        protocol,
        busy,
        params,
        n_per_point,
        seed,
        ROC_STREAM_BASE + blocks,
    );
    h0.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    h1.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = n_per_point as f64;
    Ok(thresholds
        .iter()
        .map(|&t| {
            // busy is declared when M > t; ties go to idle
            let le0 = h0.partition_point(|&m| m <= t);
            let le1 = h1.partition_point(|&m| m <= t);
            RocPoint {
                threshold: t,
                pf_hat: (n_per_point - le0) as f64 / n,
                pm_hat: le1 as f64 / n,
            }
        })
        .collect())
}

// ===========================================================================
// Tests
// ===========================================================================
