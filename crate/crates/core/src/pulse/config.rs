//! `key=value` system configuration files.
//!
//! ```text
//! # rad/s
//! omega0 = 3141.592653589793
//! omega1 = 157.07963267948966
//! omega2 = 31.41592653589793
//! omegac = 6.283185307179586
//! kappa  = 3.141592653589793   # optional
//! ```

use super::compile::BandwidthModel;
use super::system::SpinSystem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub system: SpinSystem,
    pub bandwidth: BandwidthModel,
}

impl SystemConfig {
    /// Parses and validates a configuration. Syntax problems are
    /// `Error::Parse`; physically invalid parameters are `Error::InvalidSystem`.
    pub fn parse(text: &str) -> Result<SystemConfig> {
        let mut values: [Option<f64>; 5] = [None; 5];
        const KEYS: [&str; 5] = ["omega0", "omega1", "omega2", "omegac", "kappa"];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got `{line}`")))?;
            let key = key.trim().to_ascii_lowercase();
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| parse_err(format!("unknown key `{key}`")))?;
            if values[slot].is_some() {
                return Err(parse_err(format!("duplicate key `{key}`")));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("`{}` is not a number", value.trim())))?;
            if !value.is_finite() {
                return Err(parse_err(format!("`{key}` must be finite")));
            }
            values[slot] = Some(value);
        }
        let get = |i: usize| {
            values[i].ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing key `{}`", KEYS[i]),
            })
        };
        let system = SpinSystem::new(get(0)?, get(1)?, get(2)?, get(3)?)?;
        let bandwidth = match values[4] {
            Some(kappa) => BandwidthModel::new(kappa).map_err(|e| Error::InvalidSystem(e.to_string()))?,
            None => BandwidthModel::default(),
        };
        Ok(SystemConfig { system, bandwidth })
    }

    pub fn demo() -> SystemConfig {
        SystemConfig {
            system: SpinSystem::demo(),
            bandwidth: BandwidthModel::default(),
        }
    }

    /// Renders the configuration in the file format `parse` reads.
    pub fn to_text(&self) -> String {
        let s = &self.system;
        format!(
            "omega0 = {:?}\nomega1 = {:?}\nomega2 = {:?}\nomegac = {:?}\nkappa = {:?}\n",
            s.omega0(),
            s.omega1(),
            s.omega2(),
            s.omegac(),
            self.bandwidth.kappa
        )
    }
}
