//! `sefdm`: sweeps, figure grids, matrix dumps and operation counts.

use clap::{Args, Parser, Subcommand};
use sefdm_core::complexity::{predicted_ops, Method};
use sefdm_core::detectors::{DetectorKind, MappingMode, Schedule, StartPoint};
use sefdm_core::harness::{self, figure_spec, BerRecord, Figure, RunConfig, SweepSpec};
use sefdm_core::{carrier_matrix, Scheme, SefdmConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "sefdm", version, about = "SEFDM detection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a BER sweep over the Cartesian product of the given lists
    Sweep(SweepArgs),
    /// Run a canned figure grid (3, 4 or 5)
    Figure(FigureArgs),
    /// Print the carrier matrix F, the Gram matrix M and its condition number
    Matrices(MatricesArgs),
    /// Print predicted real-operation counts
    Ops(OpsArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// TOML file with sweep keys; flags given on the command line win
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Carrier counts, comma separated
    #[arg(long = "n", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Bandwidth-compression factors, comma separated
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Es/N0 points in dB, comma separated
    #[arg(long = "snr-db", value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Option<Vec<f64>>,
    /// Detectors: iterative, ml, sd, zf
    #[arg(long, value_delimiter = ',')]
    detector: Option<Vec<DetectorKind>>,
    /// Iteration counts for the iterative detector
    #[arg(long, value_delimiter = ',')]
    iterations: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    constellation: Option<Scheme>,
    /// Relaxation parameter
    #[arg(long)]
    lambda: Option<f64>,
    /// Soft-mapping width at the first iteration
    #[arg(long = "d-start")]
    d_start: Option<f64>,
    /// Soft-mapping width at the last iteration
    #[arg(long = "d-end")]
    d_end: Option<f64>,
    /// Mapping after each iteration: soft, hard or none
    #[arg(long, value_parser = parse_mapping)]
    mapping: Option<MappingMode>,
    /// Keep the mapping width fixed at d-start
    #[arg(long)]
    constant_d: bool,
    /// Starting vector: zf or observation
    #[arg(long, value_parser = parse_start)]
    start: Option<StartPoint>,
    /// Keep symbols fixed once decided
    #[arg(long)]
    freeze: bool,
    /// Sphere-decoder diagonal loading (default: noise variance)
    #[arg(long = "sd-epsilon")]
    sd_epsilon: Option<f64>,
    /// Minimum bits per cell
    #[arg(long = "min-bits")]
    min_bits: Option<u64>,
    /// Bit errors to collect before stopping (up to 100x min-bits)
    #[arg(long = "min-errors")]
    min_errors: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Record per-cell wall-clock seconds (output no longer reproducible)
    #[arg(long = "wall-time")]
    wall_time: bool,
    /// Worker threads (overrides SEFDM_THREADS)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Figure number: 3 (BER vs alpha), 4 (BER vs SNR per alpha), 5 (SD vs iterative)
    #[arg(value_parser = |s: &str| s.parse::<Figure>())]
    figure: Figure,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Output CSV path (default figure<k>.csv)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatricesArgs {
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    constellation: Option<Scheme>,
    /// Read n_carriers / alpha / constellation from a TOML file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OpsArgs {
    /// ml, sd or iterative
    #[arg(long)]
    method: Method,
    #[arg(long = "n")]
    n: usize,
    #[arg(long)]
    alpha: f64,
    /// Constellation size
    #[arg(long = "l", default_value_t = 4)]
    l: usize,
    /// Sphere-decoder exponent factor in L^(gamma N)
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
}

fn parse_mapping(s: &str) -> Result<MappingMode, String> {
    match s {
        "soft" => Ok(MappingMode::Soft),
        "hard" => Ok(MappingMode::Hard),
        "none" => Ok(MappingMode::None),
        other => Err(format!("unknown mapping '{other}' (expected soft, hard or none)")),
    }
}

fn parse_start(s: &str) -> Result<StartPoint, String> {
    match s {
        "zf" => Ok(StartPoint::ZeroForcing),
        "observation" | "r" => Ok(StartPoint::Observation),
        other => Err(format!("unknown start '{other}' (expected zf or observation)")),
    }
}

impl GridArgs {
    fn apply(&self, spec: &mut SweepSpec) {
        if let Some(v) = &self.n {
            spec.n_list = v.clone();
        }
        if let Some(v) = &self.alpha {
            spec.alpha_list = v.clone();
        }
        if let Some(v) = &self.snr_db {
            spec.snr_db_list = v.clone();
        }
        if let Some(v) = &self.detector {
            spec.detectors = v.clone();
        }
        if let Some(v) = &self.iterations {
            spec.iterations_list = v.clone();
        }
    }
}

impl RunArgs {
    fn apply(&self, spec: &mut SweepSpec) {
        if let Some(v) = self.constellation {
            spec.constellation = v;
        }
        if let Some(v) = self.lambda {
            spec.lambda = v;
        }
        if let Some(v) = self.d_start {
            spec.d_start = v;
        }
        if let Some(v) = self.d_end {
            spec.d_end = v;
        }
        if let Some(v) = self.mapping {
            spec.mapping = v;
        }
        if self.constant_d {
            spec.schedule = Schedule::Constant;
        }
        if let Some(v) = self.start {
            spec.start = v;
        }
        if self.freeze {
            spec.freeze_decided = true;
        }
        if self.sd_epsilon.is_some() {
            spec.sd_epsilon = self.sd_epsilon;
        }
        if let Some(v) = self.min_bits {
            spec.min_bits = v;
        }
        if let Some(v) = self.min_errors {
            spec.min_bit_errors = v;
        }
        if let Some(v) = self.seed {
            spec.base_seed = v;
        }
        if self.wall_time {
            spec.record_wall_time = true;
        }
    }

    fn workers(&self) -> usize {
        self.threads.unwrap_or_else(harness::worker_count)
    }
}

fn run_and_report(spec: &SweepSpec, out: &Path, workers: usize) -> Result<(), String> {
    let records = harness::run_sweep_with_workers(spec, out, workers).map_err(|e| e.to_string())?;
    print_summary(&records);
    eprintln!("wrote {} rows to {}", records.len(), out.display());
    Ok(())
}

fn print_summary(records: &[BerRecord]) {
    println!(
        "{:>3} {:>6} {:>7} {:>10} {:>5} {:>10} {:>8} {:>11}  status",
        "n", "alpha", "snr_db", "detector", "iter", "bits", "errors", "ber"
    );
    for r in records {
        println!(
            "{:>3} {:>6} {:>7} {:>10} {:>5} {:>10} {:>8} {:>11.4e}  {}",
            r.n, r.alpha, r.snr_db, r.detector.to_string(), r.iterations, r.bits_sent, r.bit_errors, r.ber, r.status
        );
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), String> {
    let mut spec = match &args.config {
        Some(path) => RunConfig::load(path).map_err(|e| e.to_string())?.to_spec(),
        None => SweepSpec::default(),
    };
    args.grid.apply(&mut spec);
    args.run.apply(&mut spec);
    run_and_report(&spec, &args.out, args.run.workers())
}

fn cmd_figure(args: &FigureArgs) -> Result<(), String> {
    let mut spec = figure_spec(args.figure);
    args.grid.apply(&mut spec);
    args.run.apply(&mut spec);
    let number = match args.figure {
        Figure::BerVsAlpha => 3,
        Figure::BerVsSnr => 4,
        Figure::DetectorComparison => 5,
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("figure{number}.csv")));
    run_and_report(&spec, &out, args.run.workers())
}

fn cmd_matrices(args: &MatricesArgs) -> Result<(), String> {
    let file = match &args.config {
        Some(path) => Some(RunConfig::load(path).map_err(|e| e.to_string())?.to_spec()),
        None => None,
    };
    let n = args
        .n
        .or_else(|| file.as_ref().map(|s| s.n_list[0]))
        .ok_or("missing --n (or n_carriers in --config)")?;
    let alpha = args
        .alpha
        .or_else(|| file.as_ref().map(|s| s.alpha_list[0]))
        .ok_or("missing --alpha (or alpha in --config)")?;
    let scheme = args
        .constellation
        .or_else(|| file.as_ref().map(|s| s.constellation))
        .unwrap_or(Scheme::Qam4);
    let config = SefdmConfig::new(n, alpha, scheme).map_err(|e| e.to_string())?;
    let m = carrier_matrix::<f64>(&config);
    println!("n_carriers={n} alpha={alpha} constellation={scheme}");
    for (name, mat) in [("F", &m.f_matrix), ("M", &m.gram)] {
        println!("{name} =");
        for row in mat.row_iter() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}j", z.re, z.im))
                .collect();
            println!("  [{}]", cells.join(", "));
        }
    }
    println!("condition(M)={:e}", m.condition_estimate);
    println!("rcond(F)={:e}", m.f_rcond);
    match config.fast_transform_size() {
        Some(q) => println!("fast_transform_size={q}"),
        None => println!("fast_transform_size=none"),
    }
    Ok(())
}

fn cmd_ops(args: &OpsArgs) -> Result<(), String> {
    SefdmConfig::qam4(args.n, args.alpha).map_err(|e| e.to_string())?;
    if args.l < 2 {
        return Err(format!("--l must be at least 2, got {}", args.l));
    }
    let p = predicted_ops(args.method, args.n, args.alpha, args.l, args.gamma);
    println!("RA={} RM={}", p.real_additions, p.real_multiplications);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Matrices(a) => cmd_matrices(a),
        Command::Ops(a) => cmd_ops(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
