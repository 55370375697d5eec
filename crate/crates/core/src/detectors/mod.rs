//! Symbol detectors operating on the correlator output `R = M S + noise`.

mod iterative;
mod linear;
mod mapping;
mod ml;
mod sphere;

pub use iterative::{iterate_detect, IterativeConfig, MappingMode, StartPoint};
pub use linear::{initial_estimate, zf_detect};
pub use mapping::{d_schedule, hard_map, soft_map, MappingRegion, Schedule};
pub use ml::{ml_detect, MlConfig, DEFAULT_SEARCH_CAP};
pub use sphere::{sphere_detect, InitialRadius, SphereConfig, SphereDecoder};

use crate::complexity::OpCount;
use crate::matrices::mat_vec;
use crate::scalar::{dist_sqr, Cplx, Real};
use crate::system::SefdmSystem;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Detector selector used by the harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    /// Zero-forcing estimate followed by a hard decision.
    Zf,
    Iterative,
    Ml,
    Sd,
}

impl DetectorKind {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorKind::Zf => "zf",
            DetectorKind::Iterative => "iterative",
            DetectorKind::Ml => "ml",
            DetectorKind::Sd => "sd",
        }
    }

    /// Whether the iteration count is meaningful for this detector.
    pub fn is_iterative(&self) -> bool {
        matches!(self, DetectorKind::Iterative)
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zf" => Ok(DetectorKind::Zf),
            "iterative" | "iter" => Ok(DetectorKind::Iterative),
            "ml" => Ok(DetectorKind::Ml),
            "sd" => Ok(DetectorKind::Sd),
            other => Err(format!(
                "unknown detector '{other}' (expected iterative, ml, sd or zf)"
            )),
        }
    }
}

/// Outcome of one detection.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorResult<T> {
    /// Detected constellation points.
    pub symbols: Vec<Cplx<T>>,
    /// Constellation indices of `symbols`.
    pub indices: Vec<usize>,
    /// Final complex vector before the last hard decision.
    pub raw: Vec<Cplx<T>>,
    pub iterations_used: usize,
    /// Entries left outside every decision area after each iteration.
    pub per_iteration_undecided: Vec<usize>,
    /// Total operation count, `None` when counting was disabled.
    pub op_counts: Option<OpCount>,
    /// Per-iteration counts for iterative detectors.
    pub per_iteration_ops: Vec<OpCount>,
    /// `||R - M S_hat||^2`.
    pub metric: f64,
    /// Tree nodes expanded by the sphere decoder; candidates scored by ML.
    pub visited_nodes: u64,
}

impl<T: Real> DetectorResult<T> {
    pub(crate) fn from_indices(
        system: &SefdmSystem<T>,
        r: &[Cplx<T>],
        indices: Vec<usize>,
        raw: Vec<Cplx<T>>,
    ) -> Self {
        let symbols: Vec<Cplx<T>> = indices.iter().map(|&i| system.constellation().point(i)).collect();
        let metric = residual_metric(system, r, &symbols).to_f64_lossy();
        Self {
            symbols,
            indices,
            raw,
            iterations_used: 0,
            per_iteration_undecided: Vec::new(),
            op_counts: None,
            per_iteration_ops: Vec::new(),
            metric,
            visited_nodes: 0,
        }
    }
}

/// `||r - M s||^2` evaluated with a dense product.
pub fn residual_metric<T: Real>(system: &SefdmSystem<T>, r: &[Cplx<T>], s: &[Cplx<T>]) -> T {
    dist_sqr(r, &mat_vec(system.gram(), s))
}
