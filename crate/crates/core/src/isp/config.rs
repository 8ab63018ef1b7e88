use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("r_dec must lie in (0, 1), got {0}")]
    ShrinkRatio(f64),
    #[error("r_inc must be positive, got {0}")]
    ExtendRatio(f64),
    #[error("k_max must be at least 1")]
    KMax,
    #[error("time limit must be a non-negative number of seconds, got {0}")]
    TimeLimit(f64),
    #[error("container width must be at least one pixel, got {0}")]
    Width(i32),
}

/// Parameters of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub width_px: i32,
    pub r_dec: f64,
    pub r_inc: f64,
    pub k_max: u32,
    /// Wall-clock limit for the search phase, in seconds.
    pub time_limit: f64,
    pub seed: u64,
    pub corner_reduction: bool,
    /// Optional cap on CDH calls; makes a run independent of machine speed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cdh_calls: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            width_px: 128,
            r_dec: 0.02,
            r_inc: 0.005,
            k_max: 200,
            time_limit: 60.0,
            seed: 1,
            corner_reduction: true,
            max_cdh_calls: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.r_dec > 0.0 && self.r_dec < 1.0) {
            return Err(ConfigError::ShrinkRatio(self.r_dec));
        }
        if !(self.r_inc > 0.0 && self.r_inc.is_finite()) {
            return Err(ConfigError::ExtendRatio(self.r_inc));
        }
        if self.k_max == 0 {
            return Err(ConfigError::KMax);
        }
        if self.time_limit.is_nan() || self.time_limit < 0.0 {
            return Err(ConfigError::TimeLimit(self.time_limit));
        }
        if self.width_px < 1 {
            return Err(ConfigError::Width(self.width_px));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = SolverConfig::default();
        assert_eq!((c.r_dec, c.r_inc, c.k_max), (0.02, 0.005, 200));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |f: fn(&mut SolverConfig)| {
            let mut c = SolverConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.r_dec = 1.0));
        assert!(bad(|c| c.r_dec = 0.0));
        assert!(bad(|c| c.r_inc = 0.0));
        assert!(bad(|c| c.k_max = 0));
        assert!(bad(|c| c.time_limit = f64::NAN));
        assert!(bad(|c| c.width_px = 0));
    }
}
