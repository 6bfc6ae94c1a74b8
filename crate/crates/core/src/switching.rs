//! Mode selection between the two protocols and the parameter sweeps
//! behind the standard figures: throughput versus spatial correlation,
//! the detector ROC family, and throughput versus transmit power with the
//! best-power search.
//!
//! The criterion is a static comparison of the two statistical
//! throughputs: delta = C_lbt - C_lat, half-duplex when delta >= 0
//! (ties included), full-duplex otherwise. Sweeps hold the Monte-Carlo
//! rate seed fixed across grid points (common random numbers), so every
//! sweep is a pure function of (params, grid, seed) and monotone trends
//! are not blurred by resampling noise.

use crate::error::{Error, Result};
use crate::lat::{lat_overall, pf_given_pm};
use crate::lbt::{ergodic_rate_mc, lbt_pf_given_pm, rate_high_snr, Variant, DEFAULT_RATE_DRAWS};
use crate::params::{db_to_linear, SystemParams};
use rayon::prelude::*;

/// Which protocol the switch selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Lbt,
    Lat,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Lbt => "LBT",
            Mode::Lat => "LAT",
        }
    }
}

/// Outcome of the throughput comparison at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDecision {
    /// c_lbt - c_lat.
    pub delta_c: f64,
    pub mode: Mode,
    pub c_lbt: f64,
    pub c_lat: f64,
}

impl ModeDecision {
    /// The switching rule: half-duplex when delta >= 0 (tie included).
    pub fn from_throughputs(c_lbt: f64, c_lat: f64) -> ModeDecision {
        let delta_c = c_lbt - c_lat;
        ModeDecision {
            delta_c,
            mode: if delta_c >= 0.0 { Mode::Lbt } else { Mode::Lat },
            c_lbt,
            c_lat,
        }
    }
}

/// How the half-duplex rate is computed inside decisions and sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    /// Monte-Carlo expectation of the exact log-det rate.
    ExactMc { draws: usize, seed: u64 },
    /// The four-term high-SNR closed form.
    HighSnrApprox,
}

impl Default for RateMethod {
    fn default() -> Self {
        RateMethod::ExactMc {
            draws: DEFAULT_RATE_DRAWS,
            seed: 0,
        }
    }
}

impl RateMethod {
    fn describe(&self) -> String {
        match self {
            RateMethod::ExactMc { draws, seed } => {
                format!("lbt rate: exact log-det Monte Carlo, draws={draws}, seed={seed}")
            }
            RateMethod::HighSnrApprox => "lbt rate: high-SNR closed form".to_string(),
        }
    }
}

/// Rate, false alarm, and throughput of one protocol at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolReport {
    pub rate: f64,
    pub pf: f64,
    pub throughput: f64,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis: f64,
    pub lbt: ProtocolReport,
    pub lat: ProtocolReport,
    pub decision: ModeDecision,
}

/// A full sweep: rows aligned with the grid, plus derived landmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_name: &'static str,
    pub rows: Vec<SweepRow>,
    /// Axis value where delta changes sign, by linear interpolation
    /// between the bracketing grid points (first crossing if several).
    pub crossover: Option<f64>,
    /// Axis value of the largest full-duplex throughput.
    pub argmax_lat: Option<f64>,
    /// Human-readable notes: rate method, seed, grid resolution.
    pub metadata: Vec<String>,
}

fn lbt_point(
    params: &SystemParams,
    variant: Variant,
    method: RateMethod,
) -> Result<ProtocolReport> {
    let pf = lbt_pf_given_pm(params.pm_target, params.tau, params, variant)?;
    let rate = match method {
        RateMethod::ExactMc { draws, seed } => ergodic_rate_mc(params, draws, seed)?.mean,
        RateMethod::HighSnrApprox => rate_high_snr(params),
    };
    Ok(ProtocolReport {
        rate,
        pf,
        throughput: rate * (1.0 - pf),
    })
}

fn lat_point(params: &SystemParams) -> Result<ProtocolReport> {
    let r = lat_overall(params)?;
    Ok(ProtocolReport {
        rate: r.rate,
        pf: r.pf_overall,
        throughput: r.throughput,
    })
}

/// Evaluate both protocols at one operating point and pick the mode.
pub fn delta_c(
    params: &SystemParams,
    variant: Variant,
    method: RateMethod,
) -> Result<ModeDecision> {
    params.validate()?;
    let lbt = lbt_point(params, variant, method)?;
    let lat = lat_point(params)?;
    Ok(ModeDecision::from_throughputs(
        lbt.throughput,
        lat.throughput,
    ))
}

fn sweep_over(
    axis_name: &'static str,
    points: &[(f64, SystemParams)],
    variant: Variant,
    method: RateMethod,
) -> Result<SweepResult> {
    if points.is_empty() {
        return Err(Error::OutOfRange {
            name: "grid",
            value: 0.0,
            constraint: "non-empty",
        });
    }
    let rows: Result<Vec<SweepRow>> = points
        .par_iter()
        .map(|(axis, p)| {
            p.validate()?;
            let lbt = lbt_point(p, variant, method)?;
            let lat = lat_point(p)?;
            Ok(SweepRow {
                axis: *axis,
                lbt,
                lat,
                decision: ModeDecision::from_throughputs(lbt.throughput, lat.throughput),
            })
        })
        .collect();
    let rows = rows?;

    let mut crossover = None;
    let mut crossings = 0usize;
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if (a.decision.delta_c >= 0.0) != (b.decision.delta_c >= 0.0) {
            crossings += 1;
            if crossover.is_none() {
                let da = a.decision.delta_c;
                let db = b.decision.delta_c;
                crossover = Some(a.axis + (0.0 - da) * (b.axis - a.axis) / (db - da));
            }
        }
    }
    let argmax_lat = rows
        .iter()
        .max_by(|a, b| a.lat.throughput.partial_cmp(&b.lat.throughput).unwrap())
        .map(|r| r.axis);

    let step = if rows.len() > 1 {
        rows[1].axis - rows[0].axis
    } else {
        0.0
    };
    let mut metadata = vec![
        method.describe(),
        format!("miss-detection slope variant: {}", variant.label()),
        format!("grid step: {step}"),
        format!("delta sign changes: {crossings}"),
    ];
    if let Some(x) = crossover {
        metadata.push(format!(
            "crossover at {axis_name} = {x} (linear interpolation, resolution {step})"
        ));
    }
    Ok(SweepResult {
        axis_name,
        rows,
        crossover,
        argmax_lat,
        metadata,
    })
}

/// Throughput of both protocols across a common spatial-correlation grid
/// (beta_s = beta_t = beta_r = beta).
pub fn sweep_beta(
    params: &SystemParams,
    beta_grid: &[f64],
    variant: Variant,
    method: RateMethod,
) -> Result<SweepResult> {
    if beta_grid.iter().any(|b| !(0.0..1.0).contains(b)) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: f64::NAN,
            constraint: "grid within [0, 1)",
        });
    }
    let points: Vec<(f64, SystemParams)> = beta_grid
        .iter()
        .map(|&b| (b, params.with_beta(b)))
        .collect();
    sweep_over("beta", &points, variant, method)
}

/// Throughput of both protocols across a transmit-power grid in dB
/// (relative to the noise power). Both the interference and transmission
/// ratios scale with the power, consistent with their definitions.
pub fn sweep_power(
    params: &SystemParams,
    power_db_grid: &[f64],
    variant: Variant,
    method: RateMethod,
) -> Result<SweepResult> {
    if power_db_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange {
            name: "power_db",
            value: f64::NAN,
            constraint: "grid strictly ascending",
        });
    }
    let points: Vec<(f64, SystemParams)> = power_db_grid
        .iter()
        .map(|&db| (db, params.with_sigma_s2(db_to_linear(db))))
        .collect();
    sweep_over("power_db", &points, variant, method)
}

/// Evenly spaced grid helper (inclusive of both ends, within fp wobble).
pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

/// One labeled false-alarm curve of the ROC family.
#[derive(Debug, Clone, PartialEq)]
pub struct RocColumn {
    pub label: String,
    pub pf: Vec<f64>,
}

/// Analytic ROC family over a miss-detection grid: the full-duplex silent,
/// active, and overall curves per self-interference factor, and the
/// half-duplex curves per sensing time for both slope variants.
#[derive(Debug, Clone, PartialEq)]
pub struct RocSweep {
    pub pm_grid: Vec<f64>,
    pub columns: Vec<RocColumn>,
}

pub fn roc_sweep(
    params: &SystemParams,
    pm_grid: &[f64],
    tau_list: &[f64],
    chi_list: &[f64],
) -> Result<RocSweep> {
    params.validate()?;
    if pm_grid.is_empty() || pm_grid.iter().any(|p| *p <= 0.0 || *p >= 1.0) {
        return Err(Error::OutOfRange {
            name: "pm_grid",
            value: f64::NAN,
            constraint: "non-empty, within (0, 1)",
        });
    }
    let mut columns = Vec::new();

    let silent: Result<Vec<f64>> = pm_grid
        .iter()
        .map(|&pm| pf_given_pm(pm, false, params))
        .collect();
    columns.push(RocColumn {
        label: "lat_pf_silent".to_string(),
        pf: silent?,
    });

    for &chi in chi_list {
        let mut p = *params;
        p.chi = chi;
        p.validate()?;
        let active: Result<Vec<f64>> = pm_grid
            .iter()
            .map(|&pm| pf_given_pm(pm, true, &p))
            .collect();
        columns.push(RocColumn {
            label: format!("lat_pf_active_chi{chi}"),
            pf: active?,
        });
        let overall: Result<Vec<f64>> = pm_grid
            .iter()
            .map(|&pm| {
                let pf0 = pf_given_pm(pm, false, &p)?;
                let pf1 = pf_given_pm(pm, true, &p)?;
                Ok(crate::lat::steady_state(pm, pm, pf0, pf1)?.p00)
            })
            .collect();
        columns.push(RocColumn {
            label: format!("lat_pf_overall_chi{chi}"),
            pf: overall?,
        });
    }

    for &tau in tau_list {
        let frac = tau / params.slot_t;
        for variant in [Variant::Consistent, Variant::Literal] {
            let pf: Result<Vec<f64>> = pm_grid
                .iter()
                .map(|&pm| lbt_pf_given_pm(pm, tau, params, variant))
                .collect();
            columns.push(RocColumn {
                label: format!("lbt_pf_{}_tau{frac}", variant.label()),
                pf: pf?,
            });
        }
    }
    Ok(RocSweep {
        pm_grid: pm_grid.to_vec(),
        columns,
    })
}

// ===========================================================================
// Tests
// ===========================================================================
