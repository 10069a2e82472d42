//! Run-configuration files.
//!
//! One `key = value` pair per line; blank lines and anything after `#` are
//! ignored. Recognised keys:
//!
//! | key          | value                                         |
//! |--------------|-----------------------------------------------|
//! | `alpha`      | real in (0, 1]                                |
//! | `sigma`      | real, at least 0                              |
//! | `t_f`        | integer, at least 1                           |
//! | `seed`       | unsigned 64-bit integer                       |
//! | `schedule`   | comma-separated `fraction:temperature` pairs  |
//! | `n_runs`     | integer, at least 1                           |
//! | `trajectory` | `on`/`off` (also `true`/`false`, `yes`/`no`)  |
//!
//! Every key is optional. If a key appears twice the later line wins.

use std::str::FromStr;

use crate::error::{ConfigError, ParamError};
use crate::schedule::Schedule;
use crate::solver::NmfaParams;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub t_f: Option<usize>,
    pub seed: Option<u64>,
    pub schedule: Option<Schedule>,
    pub n_runs: Option<usize>,
    pub trajectory: Option<bool>,
}

impl RunConfig {
    /// Copies every value present here onto `params`.
    pub fn apply(&self, params: &mut NmfaParams) {
        if let Some(v) = self.alpha {
            params.alpha = v;
        }
        if let Some(v) = self.sigma {
            params.sigma = v;
        }
        if let Some(v) = self.t_f {
            params.iterations = v;
        }
        if let Some(v) = self.seed {
            params.seed = v;
        }
        if let Some(v) = &self.schedule {
            params.schedule = v.clone();
        }
    }
}

fn parse_switch(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Some(true),
        "off" | "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut cfg = RunConfig::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::Value { line, key: key.to_string(), value: value.to_string() };
            let param = |source: ParamError| ConfigError::Param { line, source };
            match key {
                "alpha" => cfg.alpha = Some(value.parse().map_err(|_| bad())?),
                "sigma" => cfg.sigma = Some(value.parse().map_err(|_| bad())?),
                "t_f" => {
                    let t: usize = value.parse().map_err(|_| bad())?;
                    if t == 0 {
                        return Err(param(ParamError::Iterations));
                    }
                    cfg.t_f = Some(t);
                }
                "seed" => cfg.seed = Some(value.parse().map_err(|_| bad())?),
                "schedule" => cfg.schedule = Some(value.parse().map_err(param)?),
                "n_runs" => {
                    let r: usize = value.parse().map_err(|_| bad())?;
                    if r == 0 {
                        return Err(param(ParamError::Runs));
                    }
                    cfg.n_runs = Some(r);
                }
                "trajectory" => cfg.trajectory = Some(parse_switch(value).ok_or_else(bad)?),
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        Ok(cfg)
    }
}
