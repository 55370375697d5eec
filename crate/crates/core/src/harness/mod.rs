//! Monte Carlo BER experiments: cells, sweeps, CSV output and canned
//! figure grids.

mod cell;
mod config_file;
mod csv_out;
mod figures;
pub mod stats;
mod sweep;

pub use cell::{run_cell, try_run_cell, BerRecord, CellSpec, BIT_CAP_FACTOR};
pub use config_file::{OneOrMany, RunConfig};
pub use csv_out::RecordWriter;
pub use figures::{figure_spec, Figure, FIGURE_ALPHAS};
pub use sweep::{
    cell_seed, run_cells, run_cells_streaming, run_sweep, run_sweep_with_workers, worker_count,
    write_records, SweepSpec, ACCEPTANCE_MIN_BITS, THREADS_ENV,
};
