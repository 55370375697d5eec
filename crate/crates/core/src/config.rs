//! System configuration: carrier count, compression factor and alphabet.

use crate::constellation::Scheme;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance used when deciding whether `N / alpha` is an integer.
const INTEGRAL_TOL: f64 = 1e-9;

/// One SEFDM system instance. The symbol period is normalized to `T = 1`,
/// so the subcarrier spacing equals `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SefdmConfig {
    pub n_carriers: usize,
    pub alpha: f64,
    pub constellation: Scheme,
}

impl SefdmConfig {
    pub fn new(n_carriers: usize, alpha: f64, constellation: Scheme) -> Result<Self> {
        let cfg = Self {
            n_carriers,
            alpha,
            constellation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// 4-QAM instance, the alphabet used throughout the experiments.
    pub fn qam4(n_carriers: usize, alpha: f64) -> Result<Self> {
        Self::new(n_carriers, alpha, Scheme::Qam4)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_carriers < 2 {
            return Err(Error::InvalidConfig(format!(
                "n_carriers must be at least 2, got {}",
                self.n_carriers
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Normalized symbol period.
    pub fn symbol_period(&self) -> f64 {
        1.0
    }

    /// Subcarrier spacing `alpha / T`.
    pub fn delta_f(&self) -> f64 {
        self.alpha / self.symbol_period()
    }

    /// `true` for the orthogonal (OFDM) case.
    pub fn is_orthogonal(&self) -> bool {
        self.alpha == 1.0
    }

    /// Size `Q = N / alpha` of the zero-padded transform that realizes the
    /// carrier matrix, if that ratio is an integer.
    pub fn fast_transform_size(&self) -> Option<usize> {
        let q = self.n_carriers as f64 / self.alpha;
        let rounded = q.round();
        if (q - rounded).abs() <= INTEGRAL_TOL * q.max(1.0) && rounded >= self.n_carriers as f64 {
            Some(rounded as usize)
        } else {
            None
        }
    }
}
