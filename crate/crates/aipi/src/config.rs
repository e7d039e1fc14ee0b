//! Release run configuration.
//!
//! A committed canonical-JSON config makes releases reproducible; CLI flags
//! override individual fields for experiments. Environment variables are
//! never consulted.

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::score::FloorPolicy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub version: String,
    pub cutoff_date: NaiveDate,
    pub floors: FloorPolicy,
    pub sampling_seed: u64,
    pub bootstrap_seed: u64,
    pub sample_fraction: f64,
    pub n_resamples: usize,
    pub n_bins: usize,
    pub offline: bool,
    /// Publication floor for inter-rater reliability. NON-NORMATIVE: a
    /// conventional content-analysis threshold, reported, not enforced.
    pub reliability_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: "0.0.0".to_string(),
            cutoff_date: NaiveDate::from_ymd_opt(2025, 9, 30).unwrap(),
            floors: FloorPolicy::default(),
            sampling_seed: 1,
            bootstrap_seed: 2,
            sample_fraction: 0.2,
            n_resamples: 1000,
            n_bins: 5,
            offline: true,
            reliability_threshold: 0.667,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Config {
            message: format!("{}: {e}", path.display()),
        })?;
        config.check()?;
        Ok(config)
    }

    pub fn check(&self) -> Result<(), Error> {
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::Config {
                message: "sample_fraction must be in (0, 1]".to_string(),
            });
        }
        if self.n_resamples < 100 {
            return Err(Error::Config {
                message: "n_resamples must be at least 100".to_string(),
            });
        }
        if self.n_bins < 2 {
            return Err(Error::Config {
                message: "n_bins must be at least 2".to_string(),
            });
        }
        for (name, v) in [
            ("min_overall_evid", self.floors.min_overall_evid),
            ("min_pillar_evid", self.floors.min_pillar_evid),
            ("min_pillar_coverage", self.floors.min_pillar_coverage),
            ("min_mean_coverage", self.floors.min_mean_coverage),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config {
                    message: format!("floor {name} must be in [0, 1]"),
                });
            }
        }
        Ok(())
    }
}
