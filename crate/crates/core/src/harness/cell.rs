//! One Monte Carlo BER cell.

use crate::complexity::{predicted_ops, sd_gamma_from_visits, Method, OpCount};
use crate::config::SefdmConfig;
use crate::constellation::Scheme;
use crate::detectors::{
    iterate_detect, ml_detect, zf_detect, DetectorKind, DetectorResult, IterativeConfig, MlConfig,
    SphereConfig, SphereDecoder,
};
use crate::error::Result;
use crate::scalar::Cplx;
use crate::system::SefdmSystem;
use crate::txrx::{add_awgn_with, NoiseModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

/// Hard cap on simulated bits as a multiple of `min_bits`.
pub const BIT_CAP_FACTOR: u64 = 100;

/// Fully resolved parameters of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub n: usize,
    pub alpha: f64,
    pub constellation: Scheme,
    pub snr_db: f64,
    pub detector: DetectorKind,
    /// Iterative parameters; `max_iterations` is the cell's iteration count.
    pub iterative: IterativeConfig,
    /// Sphere-decoder loading; `None` uses the noise variance.
    pub sd_epsilon: Option<f64>,
    pub min_bits: u64,
    pub min_bit_errors: u64,
    pub seed: u64,
    pub record_wall_time: bool,
}

impl CellSpec {
    /// Iteration count reported for the cell (0 for one-shot detectors).
    pub fn iterations(&self) -> usize {
        if self.detector.is_iterative() {
            self.iterative.max_iterations
        } else {
            0
        }
    }
}

/// One CSV row. Column order is part of the output format.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerRecord {
    pub n: usize,
    pub alpha: f64,
    pub snr_db: f64,
    pub detector: DetectorKind,
    pub iterations: usize,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub seed: u64,
    /// Mean measured real additions per detected block.
    pub ra_measured: Option<f64>,
    pub rm_measured: Option<f64>,
    pub wall_seconds: Option<f64>,
    pub ebn0_db: f64,
    /// Predicted real additions per detected block.
    pub ra_predicted: Option<f64>,
    pub rm_predicted: Option<f64>,
    /// Mean sphere-decoder nodes (or ML candidates) per block.
    pub visited_nodes: Option<f64>,
    pub status: String,
}

impl BerRecord {
    fn empty(cell: &CellSpec, status: String) -> Self {
        let bps = match cell.constellation {
            Scheme::Qam4 => 2,
            Scheme::Bpsk => 1,
        };
        Self {
            n: cell.n,
            alpha: cell.alpha,
            snr_db: cell.snr_db,
            detector: cell.detector,
            iterations: cell.iterations(),
            bits_sent: 0,
            bit_errors: 0,
            ber: 0.0,
            seed: cell.seed,
            ra_measured: None,
            rm_measured: None,
            wall_seconds: None,
            ebn0_db: NoiseModel::from_snr_db(cell.snr_db).ebn0_db(bps),
            ra_predicted: None,
            rm_predicted: None,
            visited_nodes: None,
            status,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Runs a cell; detector failures are captured in the record's status.
pub fn run_cell(cell: &CellSpec) -> BerRecord {
    match try_run_cell(cell) {
        Ok(record) => record,
        Err(e) => BerRecord::empty(cell, format!("error: {e}")),
    }
}

enum Prepared<'a> {
    Zf,
    Iterative(IterativeConfig),
    Ml(MlConfig),
    Sd(SphereDecoder<'a, f64>),
}

/// Runs a cell, propagating detector errors.
pub fn try_run_cell(cell: &CellSpec) -> Result<BerRecord> {
    let started = Instant::now();
    let config = SefdmConfig::new(cell.n, cell.alpha, cell.constellation)?;
    let system = SefdmSystem::<f64>::new(config)?;
    let noise = NoiseModel::from_snr_db(cell.snr_db);
    let detector = match cell.detector {
        DetectorKind::Zf => Prepared::Zf,
        DetectorKind::Iterative => {
            cell.iterative.validate()?;
            Prepared::Iterative(cell.iterative.clone())
        }
        DetectorKind::Ml => Prepared::Ml(MlConfig::default()),
        DetectorKind::Sd => Prepared::Sd(SphereDecoder::new(
            &system,
            SphereConfig::regularized(cell.sd_epsilon.unwrap_or(noise.sigma2)),
        )?),
    };

    let constellation = system.constellation();
    let bps = constellation.bits_per_symbol();
    let n = cell.n;
    let bits_per_block = (n * bps) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cell.seed);
    let mut bits = vec![0u8; n * bps];
    let mut detected_bits = vec![0u8; bps];
    let mut symbols = vec![Cplx::new(0.0, 0.0); n];

    let mut bits_sent = 0u64;
    let mut bit_errors = 0u64;
    let mut blocks = 0u64;
    let mut ops_total = OpCount::ZERO;
    let mut ops_counted = true;
    let mut visited_total = 0u64;
    let hard_cap = cell.min_bits.saturating_mul(BIT_CAP_FACTOR);

    while bits_sent < cell.min_bits || (bit_errors < cell.min_bit_errors && bits_sent < hard_cap) {
        for b in bits.iter_mut() {
            *b = rng.random::<bool>() as u8;
        }
        for (k, sym) in symbols.iter_mut().enumerate() {
            *sym = constellation.point(constellation.index_from_bits(&bits[k * bps..(k + 1) * bps]));
        }
        let x = add_awgn_with(&system.modulate(&symbols)?, &noise, &mut rng);
        let r = system.correlate(&x)?.with_noise(&noise, cell.seed);
        let result: DetectorResult<f64> = match &detector {
            Prepared::Zf => zf_detect(&r, &system)?,
            Prepared::Iterative(cfg) => iterate_detect(&r, &system, cfg)?,
            Prepared::Ml(cfg) => ml_detect(&r, &system, cfg)?,
            Prepared::Sd(sd) => sd.detect(&r)?,
        };
        for (k, &idx) in result.indices.iter().enumerate() {
            constellation.bits_of(idx, &mut detected_bits);
            bit_errors += detected_bits
                .iter()
                .zip(&bits[k * bps..(k + 1) * bps])
                .filter(|(a, b)| a != b)
                .count() as u64;
        }
        match result.op_counts {
            Some(ops) => ops_total += ops,
            None => ops_counted = false,
        }
        visited_total += result.visited_nodes;
        bits_sent += bits_per_block;
        blocks += 1;
    }

    let mut record = BerRecord::empty(cell, "ok".into());
    record.bits_sent = bits_sent;
    record.bit_errors = bit_errors;
    record.ber = bit_errors as f64 / bits_sent as f64;
    if ops_counted && blocks > 0 {
        let mean = ops_total * (1.0 / blocks as f64);
        record.ra_measured = Some(mean.real_additions);
        record.rm_measured = Some(mean.real_multiplications);
    }
    let l = constellation.len();
    let mean_visited = visited_total as f64 / blocks.max(1) as f64;
    let predicted = match cell.detector {
        DetectorKind::Iterative => Some(
            predicted_ops(Method::IterativePerIteration, n, cell.alpha, l, 0.0)
                * cell.iterative.max_iterations as f64,
        ),
        DetectorKind::Ml => Some(predicted_ops(Method::Ml, n, cell.alpha, l, 0.0)),
        DetectorKind::Sd => {
            // candidate count L^(gamma N) estimated from mean visited nodes
            let gamma = sd_gamma_from_visits(mean_visited, n, l);
            Some(predicted_ops(Method::Sd, n, cell.alpha, l, gamma))
        }
        DetectorKind::Zf => None,
    };
    record.ra_predicted = predicted.map(|p| p.real_additions);
    record.rm_predicted = predicted.map(|p| p.real_multiplications);
    if matches!(cell.detector, DetectorKind::Sd | DetectorKind::Ml) {
        record.visited_nodes = Some(mean_visited);
    }
    if cell.record_wall_time {
        record.wall_seconds = Some(started.elapsed().as_secs_f64());
    }
    Ok(record)
}
