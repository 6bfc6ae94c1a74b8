//! Received-signal generators for both protocols.
//!
//! Everything the detectors ever see is produced here: per-sample received
//! powers for the full-duplex (single sensing antenna) and half-duplex
//! (two correlated sensing antennas) protocols, and the Kronecker-correlated
//! 2x2 transmission channel.
//!
//! Channels are redrawn i.i.d. per sample (fast fading): the closed-form
//! moment tables treat the samples as i.i.d., which requires per-sample
//! independence. The primary signal is realized as a unit-modulus symbol
//! with uniformly random phase; the residual self-interference is drawn
//! directly as a complex Gaussian with power chi^2 sigma_s^2, with no
//! explicit channel/symbol factorization.

use crate::params::{JointState, SystemParams};
use crate::stats::{corr_sqrt_2x2, cscg, CMat2, Complex, CorrMatrix2};
use rand::Rng;

/// One unit-modulus symbol with uniformly random phase.
#[inline]
fn psk_symbol<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    Complex::new(theta.cos(), theta.sin())
}

// ---------------------------------------------------------------------------
// Full-duplex (single sensing antenna) samples
// ---------------------------------------------------------------------------

/// Precomputed per-state variances for the full-duplex received signal.
#[derive(Debug, Clone, Copy)]
struct LatCtx {
    /// sigma_h^2 sigma_P^2 folded together: gamma_s sigma_u^2 when the PU
    /// is busy, else 0.
    v_signal: f64,
    /// Residual self-interference power chi^2 sigma_s^2 when the SU is
    /// active, else 0.
    v_self: f64,
    v_noise: f64,
}

impl LatCtx {
    fn new(state: JointState, params: &SystemParams) -> Self {
        let d = params.derived_ratios();
        LatCtx {
            v_signal: if state.pu_busy {
                params.gamma_s * params.sigma_u2
            } else {
                0.0
            },
            v_self: if state.su_active {
                d.gamma_i * params.sigma_u2
            } else {
                0.0
            },
            v_noise: params.sigma_u2,
        }
    }

    /// |y|^2 for one received sample.
    #[inline]
    fn sample_power<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut y = cscg(self.v_noise, rng);
        if self.v_signal > 0.0 {
            y = y + cscg(self.v_signal, rng) * psk_symbol(rng);
        }
        if self.v_self > 0.0 {
            y = y + cscg(self.v_self, rng);
        }
        y.norm_sqr()
    }
}

/// i.i.d. received powers |y(n)|^2 under one joint hypothesis of the
/// full-duplex protocol.
pub fn gen_lat_samples<R: Rng + ?Sized>(
    state: JointState,
    params: &SystemParams,
    count: usize,
    rng: &mut R,
) -> Vec<f64> {
    let ctx = LatCtx::new(state, params);
    (0..count).map(|_| ctx.sample_power(rng)).collect()
}

/// Energy-detection statistic of the full-duplex protocol: the average of
/// `count` received powers under `state`.
pub fn lat_statistic<R: Rng + ?Sized>(
    state: JointState,
    params: &SystemParams,
    count: usize,
    rng: &mut R,
) -> f64 {
    let ctx = LatCtx::new(state, params);
    let mut acc = 0.0;
    for _ in 0..count {
        acc += ctx.sample_power(rng);
    }
    acc / count as f64
}

// ---------------------------------------------------------------------------
// Half-duplex (two correlated sensing antennas) samples
// ---------------------------------------------------------------------------

/// Precomputed state for the two-antenna sensing front end.
#[derive(Debug, Clone, Copy)]
struct LbtCtx {
    pu_busy: bool,
    /// Square root of the receive correlation matrix for beta_s.
    corr_sqrt: CMat2,
    /// Per-antenna signal power gamma_s sigma_u^2 (sigma_h^2 sigma_P^2 folded).
    v_signal: f64,
    v_noise: f64,
}

impl LbtCtx {
    fn new(pu_busy: bool, params: &SystemParams) -> Self {
        let corr = CorrMatrix2::from_real(params.beta_s)
            .expect("params.validate() guarantees beta_s in [0,1)");
        LbtCtx {
            pu_busy,
            corr_sqrt: corr_sqrt_2x2(&corr),
            v_signal: params.gamma_s * params.sigma_u2,
            v_noise: params.sigma_u2,
        }
    }

    /// (|y1|^2 + |y2|^2) / 2 for one two-antenna sample. Under the busy
    /// hypothesis the channel pair is h = Phi_s^{1/2} h0 with h0 i.i.d.
    /// complex Gaussian, and both antennas see the same primary symbol.
    #[inline]
    fn sample_power<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u0 = cscg(self.v_noise, rng);
        let u1 = cscg(self.v_noise, rng);
        if self.pu_busy && self.v_signal > 0.0 {
            let h = self
                .corr_sqrt
                .mul_vec([cscg(self.v_signal, rng), cscg(self.v_signal, rng)]);
            let s = psk_symbol(rng);
            let y0 = h[0] * s + u0;
            let y1 = h[1] * s + u1;
            (y0.norm_sqr() + y1.norm_sqr()) / 2.0
        } else {
            (u0.norm_sqr() + u1.norm_sqr()) / 2.0
        }
    }
}

/// i.i.d. two-antenna averaged powers (|y1|^2 + |y2|^2)/2 under one
/// hypothesis of the half-duplex protocol. Only `state.pu_busy` matters:
/// the SU never senses while transmitting in this protocol.
pub fn gen_lbt_samples<R: Rng + ?Sized>(
    state: JointState,
    params: &SystemParams,
    count: usize,
    rng: &mut R,
) -> Vec<f64> {
    let ctx = LbtCtx::new(state.pu_busy, params);
    (0..count).map(|_| ctx.sample_power(rng)).collect()
}

/// Energy-detection statistic of the half-duplex protocol: the average of
/// `count` two-antenna sample powers.
pub fn lbt_statistic<R: Rng + ?Sized>(
    pu_busy: bool,
    params: &SystemParams,
    count: usize,
    rng: &mut R,
) -> f64 {
    let ctx = LbtCtx::new(pu_busy, params);
    let mut acc = 0.0;
    for _ in 0..count {
        acc += ctx.sample_power(rng);
    }
    acc / count as f64
}

// ---------------------------------------------------------------------------
// Kronecker-correlated 2x2 transmission channel
// ---------------------------------------------------------------------------

/// One draw of the 2x2 transmission channel H12 = Phi_r^{1/2} H0 Phi_t^{1/2},
/// where H0 has i.i.d. complex Gaussian entries with variance
/// sigma_htilde^2.
pub fn gen_mimo_channel<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> CMat2 {
    let sr = corr_sqrt_2x2(
        &CorrMatrix2::from_real(params.beta_r)
            .expect("params.validate() guarantees beta_r in [0,1)"),
    );
    let st = corr_sqrt_2x2(
        &CorrMatrix2::from_real(params.beta_t)
            .expect("params.validate() guarantees beta_t in [0,1)"),
    );
    let v = params.sigma_h_tilde2;
    let h0 = CMat2::from_rows([cscg(v, rng), cscg(v, rng)], [cscg(v, rng), cscg(v, rng)]);
    sr.mul(&h0).mul(&st)
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    #![allow(clippy::field_reassign_with_default)]

    use super::*;
    use crate::stats::{moment_estimate, stream};

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn lat_mean_power_per_state_matches_table() {
        // Empirical per-sample mean power vs the (1 + gamma_s + gamma_i)
        // pattern; 3 sigma of the mean of 1e6 exponential-tailed powers
        // with mean m is 3m/1000 = 0.3%.
        let params = SystemParams::default(); // gamma_i = 0.79810
        let d = params.derived_ratios();
        let n = 1_000_000;
        let cases = [
            (JointState::H00, 1.0),
            (JointState::H01, 1.0 + params.gamma_s),
            (JointState::H10, 1.0 + d.gamma_i),
            (JointState::H11, 1.0 + params.gamma_s + d.gamma_i),
        ];
        for (i, (state, factor)) in cases.into_iter().enumerate() {
            let want = factor * params.sigma_u2;
            let got = mean(&gen_lat_samples(
                state,
                &params,
                n,
                &mut stream(101, i as u64),
            ));
            assert!(
                (got - want).abs() < 0.005 * want,
                "{}: mean power {got}, want {want}",
                state.label()
            );
        }
    }

    #[test]
    fn lat_h11_mean_at_default_point() {
        let params = SystemParams::default();
        let got = mean(&gen_lat_samples(
            JointState::H11,
            &params,
            1_000_000,
            &mut stream(7, 0),
        ));
        assert!((got - 1.898).abs() < 0.005 * 1.898, "H11 mean {got}");
    }

    #[test]
    fn lat_degenerate_snrs_collapse_to_noise_only() {
        let mut params = SystemParams::default();
        params.gamma_s = 0.0;
        params.sigma_s2 = 0.0;
        for (i, state) in JointState::ALL_LAT.into_iter().enumerate() {
            let got = mean(&gen_lat_samples(
                state,
                &params,
                200_000,
                &mut stream(3, i as u64),
            ));
            assert!(
                (got - 1.0).abs() < 0.01,
                "{}: mean {got} should match the noise-only state",
                state.label()
            );
        }
    }

    #[test]
    fn lbt_idle_mean_and_busy_variance_match_table() {
        let params = SystemParams::default(); // beta_s = 0.7, gamma_s = 0.1
        let n = 1_000_000;

        let idle = gen_lbt_samples(JointState::lbt(false), &params, n, &mut stream(11, 0));
        let m = mean(&idle);
        assert!((m - 1.0).abs() < 0.003, "idle mean {m}");

        // Per-sample variance of the averaged two-antenna power:
        // [(beta_s gamma_s)^2 + (gamma_s + 1)^2]/2 = 0.60745 at this point.
        let busy = gen_lbt_samples(JointState::lbt(true), &params, n, &mut stream(11, 1));
        let mp = moment_estimate(&busy).unwrap();
        assert!((mp.mean - 1.1).abs() < 0.004, "busy mean {}", mp.mean);
        assert!(
            (mp.variance - 0.60745).abs() < 0.02 * 0.60745,
            "busy per-sample variance {}",
            mp.variance
        );
    }

    #[test]
    fn lbt_degenerate_busy_equals_idle() {
        let mut params = SystemParams::default();
        params.beta_s = 0.0;
        params.gamma_s = 0.0;
        let busy = gen_lbt_samples(JointState::lbt(true), &params, 200_000, &mut stream(5, 0));
        let mp = moment_estimate(&busy).unwrap();
        assert!((mp.mean - 1.0).abs() < 0.01);
        // var of (|u1|^2+|u2|^2)/2 is sigma_u^4/2
        assert!((mp.variance - 0.5).abs() < 0.02);
    }

    #[test]
    fn lbt_fourth_moment_identity() {
        // E[|h^H h|^2] = 2 (3 + beta_s^2) sigma_h^4 for the correlated
        // channel pair; checked within 3 sigma of the empirical estimator.
        let beta = 0.7f64;
        let s = corr_sqrt_2x2(&CorrMatrix2::from_real(beta).unwrap());
        let n = 1_000_000usize;
        let mut rng = stream(13, 0);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let h = s.mul_vec([cscg(1.0, &mut rng), cscg(1.0, &mut rng)]);
            let q = h[0].norm_sqr() + h[1].norm_sqr();
            let x = q * q;
            sum += x;
            sumsq += x * x;
        }
        let m = sum / n as f64;
        let var = sumsq / n as f64 - m * m;
        let want = 2.0 * (3.0 + beta * beta);
        let tol = 3.0 * (var / n as f64).sqrt();
        assert!(
            (m - want).abs() < tol,
            "E[(h^H h)^2] = {m}, want {want} +- {tol}"
        );
    }

    #[test]
    fn mimo_uncorrelated_entries_have_unit_power() {
        let mut params = SystemParams::default();
        params.beta_t = 0.0;
        params.beta_r = 0.0;
        let n = 100_000;
        let mut rng = stream(17, 0);
        let mut acc = 0.0;
        for _ in 0..n {
            let h = gen_mimo_channel(&params, &mut rng);
            for r in 0..2 {
                for c in 0..2 {
                    acc += h.m[r][c].norm_sqr();
                }
            }
        }
        let per_entry = acc / (4 * n) as f64;
        assert!((per_entry - 1.0).abs() < 0.01, "E|entry|^2 = {per_entry}");
    }

    #[test]
    fn mimo_receive_correlation_is_beta_r() {
        let params = SystemParams::default(); // beta_r = 0.7
        let n = 100_000;
        let mut rng = stream(19, 0);
        let (mut c01, mut p0, mut p1) = (0.0f64, 0.0, 0.0);
        for _ in 0..n {
            let h = gen_mimo_channel(&params, &mut rng);
            // row correlation = receive-side correlation
            c01 += (h.m[0][0] * h.m[1][0].conj() + h.m[0][1] * h.m[1][1].conj()).re;
            p0 += h.m[0][0].norm_sqr() + h.m[0][1].norm_sqr();
            p1 += h.m[1][0].norm_sqr() + h.m[1][1].norm_sqr();
        }
        let rho = c01 / (p0 * p1).sqrt();
        assert!((rho - 0.7).abs() < 0.01, "row correlation {rho}");
    }

    #[test]
    fn generators_deterministic_under_seed() {
        let params = SystemParams::default();
        let a = gen_lat_samples(JointState::H11, &params, 64, &mut stream(23, 5));
        let b = gen_lat_samples(JointState::H11, &params, 64, &mut stream(23, 5));
        assert_eq!(a, b);
        let a = gen_lbt_samples(JointState::lbt(true), &params, 64, &mut stream(23, 6));
        let b = gen_lbt_samples(JointState::lbt(true), &params, 64, &mut stream(23, 6));
        assert_eq!(a, b);
        let a = gen_mimo_channel(&params, &mut stream(23, 7));
        let b = gen_mimo_channel(&params, &mut stream(23, 7));
        assert_eq!(a, b);
    }

    #[test]
    fn statistic_equals_mean_of_samples() {
        let params = SystemParams::default();
        let stat = lat_statistic(JointState::H01, &params, 200, &mut stream(29, 0));
        let samples = gen_lat_samples(JointState::H01, &params, 200, &mut stream(29, 0));
        assert!((stat - mean(&samples)).abs() < 1e-12);
    }
}
