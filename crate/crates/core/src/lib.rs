//! Spectrally efficient FDM (SEFDM) simulation toolkit.
//!
//! * [`config`], [`constellation`], [`matrices`], [`system`]: the discrete
//!   signal model `X = F S`, `R = F^H X = M S`.
//! * [`txrx`]: modulator, AWGN channel and correlator bank.
//! * [`detectors`]: zero-forcing, the soft-mapping iterative detector,
//!   exhaustive ML and the regularized sphere decoder.
//! * [`complexity`]: predicted and measured real-operation counts.
//! * [`harness`]: Monte Carlo BER cells, sweeps and CSV output.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the harness uses.

pub mod complexity;
pub mod config;
pub mod constellation;
pub mod detectors;
pub mod error;
pub mod harness;
pub mod matrices;
pub mod scalar;
pub mod system;
pub mod txrx;

pub use complexity::{measure_ops, predicted_ops, ComplexityReport, Method, OpCount};
pub use config::SefdmConfig;
pub use constellation::{make_constellation, Constellation, Scheme};
pub use detectors::{DetectorKind, DetectorResult, IterativeConfig, SphereConfig};
pub use error::{Error, Result};
pub use matrices::{carrier_matrix, CarrierMatrices};
pub use scalar::{Cplx, Real};
pub use system::SefdmSystem;
pub use txrx::{CorrelatorOutput, NoiseModel, SampleVector};

pub type Complex64 = Cplx<f64>;
pub type Complex32 = Cplx<f32>;
pub type System64 = SefdmSystem<f64>;
pub type System32 = SefdmSystem<f32>;
pub type CarrierMatrices64 = CarrierMatrices<f64>;
pub type Constellation64 = Constellation<f64>;
pub type DetectorResult64 = DetectorResult<f64>;
pub type CorrelatorOutput64 = CorrelatorOutput<f64>;
