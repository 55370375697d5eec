//! TOML run configuration mirroring the CLI flags.
//!
//! ```toml
//! n_carriers = [4, 8]        # a single value is also accepted
//! alpha = [0.85, 0.9]
//! constellation = "qam4"
//! snr_db = 10
//! detectors = ["iterative", "sd"]
//! iterations = [1, 2, 5, 10]
//! lambda = 1.0
//! d_start = 1.0
//! d_end = 0.0
//! min_bits = 100000
//! min_bit_errors = 100
//! seed = 1
//! ```

use super::sweep::SweepSpec;
use crate::constellation::Scheme;
use crate::detectors::{DetectorKind, MappingMode, Schedule, StartPoint};
use crate::error::{Error, Result};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Every key is optional; absent keys keep the defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_carriers: Option<OneOrMany<usize>>,
    pub alpha: Option<OneOrMany<f64>>,
    pub constellation: Option<Scheme>,
    pub snr_db: Option<OneOrMany<f64>>,
    #[serde(alias = "detector")]
    pub detectors: Option<OneOrMany<DetectorKind>>,
    pub iterations: Option<OneOrMany<usize>>,
    pub lambda: Option<f64>,
    pub d_start: Option<f64>,
    pub d_end: Option<f64>,
    pub schedule: Option<Schedule>,
    pub mapping: Option<MappingMode>,
    pub start: Option<StartPoint>,
    pub freeze_decided: Option<bool>,
    pub sd_epsilon: Option<f64>,
    pub min_bits: Option<u64>,
    #[serde(alias = "min_errors")]
    pub min_bit_errors: Option<u64>,
    #[serde(alias = "base_seed")]
    pub seed: Option<u64>,
    pub record_wall_time: Option<bool>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigFile(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigFile(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Overlays the keys present in `self` onto `spec`.
    pub fn apply(self, spec: &mut SweepSpec) {
        if let Some(v) = self.n_carriers {
            spec.n_list = v.into_vec();
        }
        if let Some(v) = self.alpha {
            spec.alpha_list = v.into_vec();
        }
        if let Some(v) = self.constellation {
            spec.constellation = v;
        }
        if let Some(v) = self.snr_db {
            spec.snr_db_list = v.into_vec();
        }
        if let Some(v) = self.detectors {
            spec.detectors = v.into_vec();
        }
        if let Some(v) = self.iterations {
            spec.iterations_list = v.into_vec();
        }
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { spec.$target = v; })*
            };
        }
        set!(lambda => lambda, d_start => d_start, d_end => d_end, schedule => schedule,
             mapping => mapping, start => start, freeze_decided => freeze_decided,
             min_bits => min_bits, min_bit_errors => min_bit_errors, seed => base_seed,
             record_wall_time => record_wall_time);
        if self.sd_epsilon.is_some() {
            spec.sd_epsilon = self.sd_epsilon;
        }
    }

    pub fn to_spec(self) -> SweepSpec {
        let mut spec = SweepSpec::default();
        self.apply(&mut spec);
        spec
    }
}
