//! System parameters and hypothesis states shared by every module.

use crate::error::{Error, Result};

/// All physical and protocol constants of one operating point.
///
/// Powers are linear, relative to the noise floor; `gamma_s` already folds
/// the sensing-channel gain and primary-signal power together, since only
/// their product enters any formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Slot duration T in seconds.
    pub slot_t: f64,
    /// Sensing subslot duration tau (half-duplex protocol) in seconds.
    pub tau: f64,
    /// Sampling frequency in Hz.
    pub fs: f64,
    /// Noise power sigma_u^2.
    pub sigma_u2: f64,
    /// Average SU transmit power sigma_s^2 (linear).
    pub sigma_s2: f64,
    /// Sensing SNR gamma_s (linear).
    pub gamma_s: f64,
    /// SU-to-SU channel gain variance sigma_htilde^2.
    pub sigma_h_tilde2: f64,
    /// Self-interference suppression factor chi in [0, 1]; residual
    /// self-interference power is chi^2 sigma_s^2.
    pub chi: f64,
    /// Spatial correlation in sensing (receive antennas of the sensing SU).
    pub beta_s: f64,
    /// Spatial correlation at the transmitter.
    pub beta_t: f64,
    /// Spatial correlation at the receiver.
    pub beta_r: f64,
    /// Target miss-detection probability used to place thresholds.
    pub pm_target: f64,
}

impl Default for SystemParams {
    /// The default operating point of the experiments: T = 0.2 ms,
    /// tau = T/4, fs = 1 MHz, unit noise power, 13 dB transmit power,
    /// -10 dB sensing SNR, chi = 0.2, beta = 0.7, Pm = 0.3.
    fn default() -> Self {
        SystemParams {
            slot_t: 2.0e-4,
            tau: 0.5e-4,
            fs: 1.0e6,
            sigma_u2: 1.0,
            sigma_s2: db_to_linear(13.0),
            gamma_s: db_to_linear(-10.0),
            sigma_h_tilde2: 1.0,
            chi: 0.2,
            beta_s: 0.7,
            beta_t: 0.7,
            beta_r: 0.7,
            pm_target: 0.3,
        }
    }
}

impl SystemParams {
    /// Check every invariant; call once after construction.
    pub fn validate(&self) -> Result<()> {
        let finite: [(&'static str, f64); 12] = [
            ("slot_t", self.slot_t),
            ("tau", self.tau),
            ("fs", self.fs),
            ("sigma_u2", self.sigma_u2),
            ("sigma_s2", self.sigma_s2),
            ("gamma_s", self.gamma_s),
            ("sigma_h_tilde2", self.sigma_h_tilde2),
            ("chi", self.chi),
            ("beta_s", self.beta_s),
            ("beta_t", self.beta_t),
            ("beta_r", self.beta_r),
            ("pm_target", self.pm_target),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
        }
        if self.slot_t <= 0.0 {
            return Err(Error::OutOfRange {
                name: "slot_t",
                value: self.slot_t,
                constraint: "slot_t > 0",
            });
        }
        if self.tau <= 0.0 || self.tau >= self.slot_t {
            return Err(Error::OutOfRange {
                name: "tau",
                value: self.tau,
                constraint: "0 < tau < slot_t",
            });
        }
        if self.fs <= 0.0 || self.fs * self.slot_t < 0.5 {
            return Err(Error::OutOfRange {
                name: "fs",
                value: self.fs,
                constraint: "fs > 0 and fs*slot_t >= 1 after rounding",
            });
        }
        if self.fs * self.tau < 0.5 {
            return Err(Error::OutOfRange {
                name: "tau",
                value: self.tau,
                constraint: "fs*tau >= 1 after rounding",
            });
        }
        for (name, v) in [
            ("sigma_u2", self.sigma_u2),
            ("sigma_s2", self.sigma_s2),
            ("gamma_s", self.gamma_s),
            ("sigma_h_tilde2", self.sigma_h_tilde2),
        ] {
            if v < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    constraint: ">= 0",
                });
            }
        }
        if self.sigma_u2 == 0.0 {
            return Err(Error::OutOfRange {
                name: "sigma_u2",
                value: 0.0,
                constraint: "sigma_u2 > 0",
            });
        }
        if !(0.0..=1.0).contains(&self.chi) {
            return Err(Error::OutOfRange {
                name: "chi",
                value: self.chi,
                constraint: "chi in [0, 1]",
            });
        }
        for (name, v) in [
            ("beta_s", self.beta_s),
            ("beta_t", self.beta_t),
            ("beta_r", self.beta_r),
        ] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    constraint: "beta in [0, 1)",
                });
            }
        }
        if self.pm_target <= 0.0 || self.pm_target >= 1.0 {
            return Err(Error::OutOfRange {
                name: "pm_target",
                value: self.pm_target,
                constraint: "pm_target in (0, 1)",
            });
        }
        Ok(())
    }

    /// Non-fatal oddities worth surfacing to the operator.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        for (label, prod) in [
            ("fs*slot_t", self.fs * self.slot_t),
            ("fs*tau", self.fs * self.tau),
        ] {
            if (prod - prod.round()).abs() > 1e-6 {
                w.push(format!(
                    "{label} = {prod} is not an integer; rounding the sample count to {}",
                    prod.round()
                ));
            }
        }
        w
    }

    /// Number of sensing samples per full slot (full-duplex protocol).
    pub fn n_samples_lat(&self) -> usize {
        (self.fs * self.slot_t).round() as usize
    }

    /// Number of sensing samples per sensing subslot of length `tau`.
    pub fn n_samples_lbt_for(&self, tau: f64) -> usize {
        (self.fs * tau).round() as usize
    }

    /// Number of sensing samples for the configured `tau`.
    pub fn n_samples_lbt(&self) -> usize {
        self.n_samples_lbt_for(self.tau)
    }

    /// Derived interference and transmission ratios at this operating point.
    pub fn derived_ratios(&self) -> DerivedRatios {
        DerivedRatios {
            gamma_i: self.chi * self.chi * self.sigma_s2 / self.sigma_u2,
            gamma_t: self.sigma_s2 * self.sigma_h_tilde2 / self.sigma_u2,
        }
    }

    /// Copy of the parameters with a different transmit power (linear).
    pub fn with_sigma_s2(&self, sigma_s2: f64) -> SystemParams {
        SystemParams { sigma_s2, ..*self }
    }

    /// Copy of the parameters with all three spatial correlations set to
    /// one common value, the convention of the experiments.
    pub fn with_beta(&self, beta: f64) -> SystemParams {
        SystemParams {
            beta_s: beta,
            beta_t: beta,
            beta_r: beta,
            ..*self
        }
    }
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Interference-to-noise and transmission SNR derived from the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRatios {
    /// gamma_i = chi^2 sigma_s^2 / sigma_u^2.
    pub gamma_i: f64,
    /// gamma_t = sigma_s^2 sigma_htilde^2 / sigma_u^2.
    pub gamma_t: f64,
}

/// Joint hypothesis: whether the primary user occupies the band and
/// whether the secondary user is transmitting.
///
/// The full-duplex protocol distinguishes all four combinations; the
/// half-duplex protocol only cares about `pu_busy` (the SU never senses
/// while transmitting there).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointState {
    pub pu_busy: bool,
    pub su_active: bool,
}

impl JointState {
    /// PU idle, SU silent.
    pub const H00: JointState = JointState {
        pu_busy: false,
        su_active: false,
    };
    /// PU busy, SU silent.
    pub const H01: JointState = JointState {
        pu_busy: true,
        su_active: false,
    };
    /// PU idle, SU active.
    pub const H10: JointState = JointState {
        pu_busy: false,
        su_active: true,
    };
    /// PU busy, SU active.
    pub const H11: JointState = JointState {
        pu_busy: true,
        su_active: true,
    };

    pub const ALL_LAT: [JointState; 4] = [Self::H00, Self::H01, Self::H10, Self::H11];

    /// Half-duplex hypothesis (SU silent while sensing).
    pub fn lbt(pu_busy: bool) -> JointState {
        JointState {
            pu_busy,
            su_active: false,
        }
    }

    pub fn label(&self) -> &'static str {
        match (self.pu_busy, self.su_active) {
            (false, false) => "H00",
            (true, false) => "H01",
            (false, true) => "H10",
            (true, true) => "H11",
        }
    }
}

#[cfg(test)]
mod tests {
    #![allow(clippy::field_reassign_with_default)]

    use super::*;

    #[test]
    fn defaults_are_the_standard_operating_point() {
        let p = SystemParams::default();
        p.validate().unwrap();
        assert_eq!(p.n_samples_lat(), 200);
        assert_eq!(p.n_samples_lbt(), 50);
        assert!((p.sigma_s2 - 19.952623149688797).abs() < 1e-12);
        assert!((p.gamma_s - 0.1).abs() < 1e-15);
        assert!(p.warnings().is_empty());
    }

    #[test]
    fn derived_ratios_examples() {
        let p = SystemParams::default();
        let d = p.derived_ratios();
        assert!((d.gamma_i - 0.79810).abs() < 1e-4);
        assert!((d.gamma_t - 19.9526).abs() < 1e-4);

        let d0 = p.with_sigma_s2(p.sigma_s2).derived_ratios();
        assert_eq!(d.gamma_i, d0.gamma_i);

        let mut p = SystemParams::default();
        p.chi = 0.0;
        assert_eq!(p.derived_ratios().gamma_i, 0.0);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut p = SystemParams::default();
        p.chi = 1.5;
        assert!(matches!(
            p.validate(),
            Err(Error::OutOfRange { name: "chi", .. })
        ));

        let mut p = SystemParams::default();
        p.tau = p.slot_t;
        assert!(p.validate().is_err());

        let mut p = SystemParams::default();
        p.beta_r = 1.0;
        assert!(p.validate().is_err());

        let mut p = SystemParams::default();
        p.pm_target = 0.0;
        assert!(p.validate().is_err());

        let mut p = SystemParams::default();
        p.sigma_u2 = f64::NAN;
        assert!(matches!(p.validate(), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn non_integer_sample_products_warn() {
        let mut p = SystemParams::default();
        p.slot_t = 2.0505e-4;
        p.validate().unwrap();
        assert_eq!(p.warnings().len(), 1);
        assert_eq!(p.n_samples_lat(), 205);
    }

    #[test]
    fn db_round_trip() {
        assert!((db_to_linear(13.0) - 19.952623149688797).abs() < 1e-12);
        assert!((linear_to_db(db_to_linear(-10.0)) - (-10.0)).abs() < 1e-12);
    }
}
