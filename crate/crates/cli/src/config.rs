//! Line-based key=value configuration files.
//!
//! Unset keys fall back to the standard operating point (see `--help`
//! for the key list). Powers arrive in dB relative to the noise floor and
//! are converted to linear internally.

use anyhow::{anyhow, bail, Context, Result};
use latsim_core::simulator::SimConfig;
use latsim_core::{db_to_linear, SystemParams};
use std::path::Path;

/// Fully resolved run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub sim: SimConfig,
    /// Channel draws for the exact-rate Monte Carlo.
    pub draws: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: SystemParams::default(),
            sim: SimConfig::default(),
            draws: latsim_core::lbt::DEFAULT_RATE_DRAWS,
        }
    }
}

impl RunConfig {
    /// Render the resolved configuration as `key=value` pairs, the same
    /// vocabulary the parser accepts.
    pub fn describe(&self) -> Vec<String> {
        let p = &self.params;
        vec![
            format!(
                "params: T={} tau={} fs={} sigma_u2={} sigma_s2={} gamma_s={} \
                 sigma_h_tilde2={} chi={} beta_s={} beta_t={} beta_r={} pm={}",
                p.slot_t,
                p.tau,
                p.fs,
                p.sigma_u2,
                p.sigma_s2,
                p.gamma_s,
                p.sigma_h_tilde2,
                p.chi,
                p.beta_s,
                p.beta_t,
                p.beta_r,
                p.pm_target
            ),
            format!(
                "sim: seed={} slots={} epochs={} burn_in={} draws={}",
                self.sim.seed, self.sim.n_slots, self.sim.n_epochs, self.sim.burn_in, self.draws
            ),
        ]
    }
}

/// Parse a configuration file; an empty file yields the full default set.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config file {}", path.display()))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key = value, got `{raw}`", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut cfg, key, value)
            .with_context(|| format!("line {}: key `{key}`", lineno + 1))?;
    }
    cfg.params
        .validate()
        .map_err(|e| anyhow!("invalid parameters: {e}"))?;
    cfg.sim
        .validate()
        .map_err(|e| anyhow!("invalid simulation settings: {e}"))?;
    if cfg.draws == 0 {
        bail!("draws must be >= 1");
    }
    Ok(cfg)
}

fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<()> {
    fn f(value: &str) -> Result<f64> {
        value
            .parse::<f64>()
            .map_err(|_| anyhow!("`{value}` is not a number"))
    }
    fn u(value: &str) -> Result<u64> {
        value
            .parse::<u64>()
            .map_err(|_| anyhow!("`{value}` is not a non-negative integer"))
    }
    let p = &mut cfg.params;
    match key {
        "T" => p.slot_t = f(value)?,
        "tau" => p.tau = f(value)?,
        "fs" => p.fs = f(value)?,
        "sigma_u2" => p.sigma_u2 = f(value)?,
        "pt_db" => p.sigma_s2 = db_to_linear(f(value)?),
        "sigma_s2" => p.sigma_s2 = f(value)?,
        "gamma_s_db" => p.gamma_s = db_to_linear(f(value)?),
        "gamma_s" => p.gamma_s = f(value)?,
        "sigma_h_tilde2" => p.sigma_h_tilde2 = f(value)?,
        "chi" => p.chi = f(value)?,
        "beta" => {
            let b = f(value)?;
            p.beta_s = b;
            p.beta_t = b;
            p.beta_r = b;
        }
        "beta_s" => p.beta_s = f(value)?,
        "beta_t" => p.beta_t = f(value)?,
        "beta_r" => p.beta_r = f(value)?,
        "pm" => p.pm_target = f(value)?,
        "seed" => cfg.sim.seed = u(value)?,
        "slots" => cfg.sim.n_slots = u(value)? as usize,
        "epochs" => cfg.sim.n_epochs = u(value)? as usize,
        "burn_in" => cfg.sim.burn_in = u(value)? as usize,
        "draws" => cfg.draws = u(value)? as usize,
        _ => bail!(
            "unknown key (expected one of T, tau, fs, sigma_u2, pt_db, sigma_s2, \
             gamma_s_db, gamma_s, sigma_h_tilde2, chi, beta, beta_s, beta_t, beta_r, \
             pm, seed, slots, epochs, burn_in, draws)"
        ),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default_point() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.params.n_samples_lat(), 200);
    }

    #[test]
    fn keys_apply_and_validate() {
        let cfg = parse_config("tau = 0.00005\nchi = 0.4\nseed = 9\n# comment\n").unwrap();
        assert_eq!(cfg.params.tau, 5e-5);
        assert_eq!(cfg.params.chi, 0.4);
        assert_eq!(cfg.sim.seed, 9);

        let err = parse_config("chi = 1.5").unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("chi"), "{msg}");

        let err = parse_config("frequency = 1").unwrap_err();
        assert!(format!("{err:#}").contains("unknown key"));

        let err = parse_config("chi 0.4").unwrap_err();
        assert!(format!("{err:#}").contains("key = value"));
    }

    #[test]
    fn db_keys_convert() {
        let cfg = parse_config("pt_db = 13\ngamma_s_db = -10\n").unwrap();
        assert!((cfg.params.sigma_s2 - 19.952623149688797).abs() < 1e-9);
        assert!((cfg.params.gamma_s - 0.1).abs() < 1e-12);
    }
}
