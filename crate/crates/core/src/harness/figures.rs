//! Canned sweeps for the standard BER figure grids, sized for a workstation.

use super::sweep::SweepSpec;
use crate::detectors::DetectorKind;
use std::str::FromStr;

/// Compression factors on the x-axis of the BER-versus-alpha figures.
pub const FIGURE_ALPHAS: [f64; 6] = [0.75, 0.8, 0.85, 0.9, 0.95, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// BER versus alpha at 10 dB: sphere decoder against 1, 2, 5 and 10
    /// iterations (N = 4 by default).
    BerVsAlpha,
    /// BER versus SNR for N = 8 and several alpha, iterative detector with
    /// 10 iterations, including the orthogonal reference.
    BerVsSnr,
    /// BER versus SNR for N = 8, alpha = 0.85: sphere decoder against the
    /// iterative detector.
    DetectorComparison,
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3" => Ok(Figure::BerVsAlpha),
            "4" => Ok(Figure::BerVsSnr),
            "5" => Ok(Figure::DetectorComparison),
            other => Err(format!("unknown figure '{other}' (expected 3, 4 or 5)")),
        }
    }
}

fn snr_range(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

pub fn figure_spec(figure: Figure) -> SweepSpec {
    let base = SweepSpec::default();
    match figure {
        Figure::BerVsAlpha => SweepSpec {
            n_list: vec![4],
            alpha_list: FIGURE_ALPHAS.to_vec(),
            snr_db_list: vec![10.0],
            detectors: vec![DetectorKind::Sd, DetectorKind::Iterative],
            iterations_list: vec![1, 2, 5, 10],
            ..base
        },
        Figure::BerVsSnr => SweepSpec {
            n_list: vec![8],
            alpha_list: vec![0.8, 0.85, 0.9, 1.0],
            snr_db_list: snr_range(0, 14),
            detectors: vec![DetectorKind::Iterative],
            iterations_list: vec![10],
            ..base
        },
        Figure::DetectorComparison => SweepSpec {
            n_list: vec![8],
            alpha_list: vec![0.85],
            snr_db_list: snr_range(0, 14),
            detectors: vec![DetectorKind::Sd, DetectorKind::Iterative],
            iterations_list: vec![10],
            ..base
        },
    }
}
