//! Tunable options, loadable from a TOML file with `[scan]` and `[rhyme]` tables.
//!
//! ```toml
//! [scan]
//! beam_width = 32
//! oov_fit_meter = true
//!
//! [scan.weights]
//! off_ictus_mono = 0.25
//!
//! [rhyme]
//! threshold = 0.8
//! ```
//!
//! Missing keys keep their defaults; unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Defect weights of the line score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Weights {
    /// Stress on a non-ictus syllable of a polysyllabic word.
    pub off_ictus: f64,
    /// Stress on a non-ictus monosyllable.
    pub off_ictus_mono: f64,
    /// Ictus skipped inside a word that could have stressed it.
    pub avoidable_miss: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            off_ictus: 1.0,
            off_ictus_mono: 0.5,
            avoidable_miss: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanOptions {
    pub beam_width: usize,
    pub weights: Weights,
    /// Penalty for stressing a function word (or for leaving a line-final one unstressed).
    pub unstress_preference: f64,
    /// Let out-of-vocabulary words take any stress position the meter wants.
    pub oov_fit_meter: bool,
    pub oov_fit_penalty: f64,
    /// Penalty for the predictor's second and later candidates.
    pub oov_alt_penalty: f64,
    /// Below this mean score the poem's meter is "other".
    pub meter_floor: f64,
    /// Lines shorter than this are flagged as low-confidence.
    pub min_syllables_confident: usize,
    /// Largest variant product the exhaustive scanner will enumerate.
    pub brute_force_cap: u64,
    /// Drop variants whose own penalty exceeds this. Off by default.
    pub max_variant_penalty: Option<f64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            beam_width: 16,
            weights: Weights::default(),
            unstress_preference: 0.1,
            oov_fit_meter: false,
            oov_fit_penalty: 0.3,
            oov_alt_penalty: 0.2,
            meter_floor: 0.5,
            min_syllables_confident: 6,
            brute_force_cap: 1_000_000,
            max_variant_penalty: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RhymeOptions {
    /// Pairs scoring at or above this rhyme.
    pub threshold: f64,
    /// Only lines at most this far apart are compared.
    pub max_distance: usize,
}

impl Default for RhymeOptions {
    fn default() -> Self {
        RhymeOptions {
            threshold: 0.75,
            max_distance: 4,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub scan: ScanOptions,
    pub rhyme: RhymeOptions,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Config::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.scan;
        let w = &s.weights;
        let non_negative = [
            ("weights.off_ictus", w.off_ictus),
            ("weights.off_ictus_mono", w.off_ictus_mono),
            ("weights.avoidable_miss", w.avoidable_miss),
            ("unstress_preference", s.unstress_preference),
            ("oov_fit_penalty", s.oov_fit_penalty),
            ("oov_alt_penalty", s.oov_alt_penalty),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "scan.{name} must be a non-negative number"
                )));
            }
        }
        if s.beam_width == 0 {
            return Err(Error::Config("scan.beam_width must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&s.meter_floor) {
            return Err(Error::Config("scan.meter_floor must be in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.rhyme.threshold) {
            return Err(Error::Config("rhyme.threshold must be in [0, 1]".into()));
        }
        Ok(())
    }
}
