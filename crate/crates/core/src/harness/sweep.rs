//! Cartesian sweeps over cells, with deterministic seeding and ordering.

use super::cell::{run_cell, BerRecord, CellSpec};
use crate::constellation::Scheme;
use crate::detectors::{DetectorKind, IterativeConfig, MappingMode, Schedule, StartPoint};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SEFDM_THREADS";

/// Smallest `min_bits` accepted for acceptance-grade runs.
pub const ACCEPTANCE_MIN_BITS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n_list: Vec<usize>,
    pub alpha_list: Vec<f64>,
    pub snr_db_list: Vec<f64>,
    pub detectors: Vec<DetectorKind>,
    pub iterations_list: Vec<usize>,
    pub min_bits: u64,
    pub min_bit_errors: u64,
    pub base_seed: u64,
    pub constellation: Scheme,
    pub lambda: f64,
    pub d_start: f64,
    pub d_end: f64,
    pub schedule: Schedule,
    pub mapping: MappingMode,
    pub start: StartPoint,
    pub freeze_decided: bool,
    pub sd_epsilon: Option<f64>,
    /// Fill the `wall_seconds` column. Timings differ between runs, so a
    /// timed CSV is not byte-reproducible.
    pub record_wall_time: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        let it = IterativeConfig::default();
        Self {
            n_list: vec![8],
            alpha_list: vec![0.85],
            snr_db_list: vec![10.0],
            detectors: vec![DetectorKind::Iterative],
            iterations_list: vec![it.max_iterations],
            min_bits: 100_000,
            min_bit_errors: 100,
            base_seed: 1,
            constellation: Scheme::Qam4,
            lambda: it.lambda,
            d_start: it.d_start,
            d_end: it.d_end,
            schedule: it.schedule,
            mapping: it.mapping,
            start: it.start,
            freeze_decided: it.freeze_decided,
            sd_epsilon: None,
            record_wall_time: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let empty = [
            ("n_list", self.n_list.is_empty()),
            ("alpha_list", self.alpha_list.is_empty()),
            ("snr_db_list", self.snr_db_list.is_empty()),
            ("detectors", self.detectors.is_empty()),
            ("iterations_list", self.iterations_list.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(Error::InvalidConfig(format!("{name} must not be empty")));
        }
        if self.min_bits == 0 {
            return Err(Error::InvalidConfig("min_bits must be positive".into()));
        }
        for &n in &self.n_list {
            crate::config::SefdmConfig::new(n, self.alpha_list[0], self.constellation)?;
        }
        for &a in &self.alpha_list {
            crate::config::SefdmConfig::new(self.n_list[0], a, self.constellation)?;
        }
        if self.snr_db_list.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig("snr_db values must be finite".into()));
        }
        for &iters in &self.iterations_list {
            self.iterative_config(iters).validate()?;
        }
        Ok(())
    }

    pub fn iterative_config(&self, max_iterations: usize) -> IterativeConfig {
        IterativeConfig {
            lambda: self.lambda,
            max_iterations,
            d_start: self.d_start,
            d_end: self.d_end,
            schedule: self.schedule,
            mapping: self.mapping,
            start: self.start,
            freeze_decided: self.freeze_decided,
        }
    }

    /// Cells in output order: N, alpha, SNR, detector, iterations (outermost
    /// first). One-shot detectors get a single cell with iteration count 0.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut cells = Vec::new();
        for &n in &self.n_list {
            for &alpha in &self.alpha_list {
                for &snr_db in &self.snr_db_list {
                    let seed = cell_seed(self.base_seed, n, alpha, snr_db);
                    for &detector in &self.detectors {
                        let iters: Vec<usize> = if detector.is_iterative() {
                            self.iterations_list.clone()
                        } else {
                            vec![self.iterations_list[0]]
                        };
                        for it in iters {
                            cells.push(CellSpec {
                                n,
                                alpha,
                                constellation: self.constellation,
                                snr_db,
                                detector,
                                iterative: self.iterative_config(it),
                                sd_epsilon: self.sd_epsilon,
                                min_bits: self.min_bits,
                                min_bit_errors: self.min_bit_errors,
                                seed,
                                record_wall_time: self.record_wall_time,
                            });
                        }
                    }
                }
            }
        }
        cells
    }
}

/// Per-cell seed: `base_seed XOR fnv1a(n, alpha, snr_db)`.
///
/// Detectors and iteration counts are not part of the hash, so every
/// detector in a sweep sees the same bits and noise at a given operating
/// point.
pub fn cell_seed(base_seed: u64, n: usize, alpha: f64, snr_db: f64) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let words = [n as u64, alpha.to_bits(), snr_db.to_bits()];
    for byte in words.iter().flat_map(|w| w.to_le_bytes()) {
        h ^= u64::from(byte);
        h = h.wrapping_mul(PRIME);
    }
    base_seed ^ h
}

/// Worker count from [`THREADS_ENV`], defaulting to the available cores.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every cell on `workers` threads; results keep cell order.
pub fn run_cells(cells: &[CellSpec], workers: usize) -> Result<Vec<BerRecord>> {
    let mut out = Vec::with_capacity(cells.len());
    run_cells_streaming(cells, workers, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Runs cells in batches of the worker count and hands records to `sink`
/// in cell order as each batch completes.
pub fn run_cells_streaming<F>(cells: &[CellSpec], workers: usize, mut sink: F) -> Result<()>
where
    F: FnMut(&BerRecord) -> Result<()>,
{
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    for batch in cells.chunks(workers) {
        let records: Vec<BerRecord> = pool.install(|| batch.par_iter().map(run_cell).collect());
        for r in &records {
            sink(r)?;
        }
    }
    Ok(())
}

/// Runs the sweep and writes the CSV to `out_path`.
///
/// Rows are written to `<out_path>.partial` as batches finish and the file
/// is renamed into place once complete; a failed run leaves the `.partial`
/// file behind.
pub fn run_sweep(spec: &SweepSpec, out_path: &Path) -> Result<Vec<BerRecord>> {
    run_sweep_with_workers(spec, out_path, worker_count())
}

pub fn run_sweep_with_workers(spec: &SweepSpec, out_path: &Path, workers: usize) -> Result<Vec<BerRecord>> {
    spec.validate()?;
    let cells = spec.cells();
    let partial = partial_path(out_path);
    let file = BufWriter::new(File::create(&partial)?);
    let mut writer = super::csv_out::RecordWriter::new(file, spec)?;
    let mut records = Vec::with_capacity(cells.len());
    run_cells_streaming(&cells, workers, |r| {
        writer.write(r)?;
        records.push(r.clone());
        Ok(())
    })?;
    writer.finish()?;
    fs::rename(&partial, out_path)?;
    Ok(records)
}

fn partial_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    out.with_file_name(name)
}

/// Writes records to any writer with the standard header.
pub fn write_records<W: Write>(out: W, spec: &SweepSpec, records: &[BerRecord]) -> Result<()> {
    let mut writer = super::csv_out::RecordWriter::new(out, spec)?;
    for r in records {
        writer.write(r)?;
    }
    writer.finish()
}
