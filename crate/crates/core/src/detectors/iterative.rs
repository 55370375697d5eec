//! Relaxed fixed-point iteration with soft decisions.
//!
//! With `G = M` the distortion operator and `R = G S` its observed output,
//! each iteration computes
//!
//! ```text
//! S_n = Q_d( lambda R + (I - lambda M) S_{n-1} )
//! ```
//!
//! where `Q_d` snaps entries lying inside a decision area to their
//! constellation point and leaves the rest untouched. The true symbol vector
//! is a fixed point of the unmapped update for every `lambda`; without
//! mapping the error evolves as `(I - lambda M)^n e_0`.

use super::linear::zero_forcing;
use super::mapping::{d_schedule, hard_map, MappingRegion, Schedule};
use super::DetectorResult;
use crate::complexity::{OpCount, OpCounter};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::system::SefdmSystem;
use crate::txrx::CorrelatorOutput;
use serde::{Deserialize, Serialize};

/// Where the recursion starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPoint {
    /// `S_0 = M^-1 R`, the zero-forcing estimate.
    #[default]
    ZeroForcing,
    /// `S_0 = R`, the observation itself.
    Observation,
}

/// Mapping applied after each iteration block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingMode {
    /// Decision areas follow the `d` schedule.
    #[default]
    Soft,
    /// Nearest-point decision after every iteration (`d = 0`).
    Hard,
    /// Plain iteration; only the final output is hard-decided.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterativeConfig {
    /// Relaxation parameter.
    pub lambda: f64,
    pub max_iterations: usize,
    pub d_start: f64,
    pub d_end: f64,
    pub schedule: Schedule,
    pub mapping: MappingMode,
    pub start: StartPoint,
    /// Keep entries fixed once they have been decided.
    pub freeze_decided: bool,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            max_iterations: 10,
            d_start: 1.0,
            d_end: 0.0,
            schedule: Schedule::LinearDecreasing,
            mapping: MappingMode::Soft,
            start: StartPoint::ZeroForcing,
            freeze_decided: false,
        }
    }
}

impl IterativeConfig {
    pub fn with_iterations(max_iterations: usize) -> Self {
        Self {
            max_iterations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(0.0 <= self.d_end && self.d_end <= self.d_start && self.d_start.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "soft-mapping schedule needs 0 <= d_end <= d_start, got d_start={}, d_end={}",
                self.d_start, self.d_end
            )));
        }
        Ok(())
    }
}

/// Runs the iterative detector.
pub fn iterate_detect<T: Real>(
    r: &CorrelatorOutput<T>,
    system: &SefdmSystem<T>,
    config: &IterativeConfig,
) -> Result<DetectorResult<T>> {
    config.validate()?;
    system.check_len(r.len())?;
    let n = system.n();
    let constellation = system.constellation();
    let lambda = T::lit(config.lambda);
    let mut counter = OpCounter::new(system.counting());

    let mut current = match config.start {
        StartPoint::ZeroForcing => zero_forcing(&r.r, system, &mut counter)?,
        StartPoint::Observation => r.r.clone(),
    };
    counter.charge(OpCount::real_by_complex_mul(n));
    let drive: Vec<Cplx<T>> = r.r.iter().map(|z| z.scale(lambda)).collect();

    let mut frozen = vec![false; n];
    let mut per_iteration_undecided = Vec::with_capacity(config.max_iterations);
    let mut per_iteration_ops = Vec::with_capacity(config.max_iterations);

    for iteration in 1..=config.max_iterations {
        let before = counter.get();
        let (gs, scale) = system.gram_times(&current, &mut counter);
        let step = lambda * scale;
        // s - (lambda / N) u, then + lambda R
        counter.charge(OpCount::real_by_complex_mul(n) + OpCount::complex_add(2 * n));
        let mut next: Vec<Cplx<T>> = current
            .iter()
            .zip(&gs)
            .zip(&drive)
            .map(|((s, u), t)| (s - u.scale(step)) + t)
            .collect();
        if config.freeze_decided {
            for i in 0..n {
                if frozen[i] {
                    next[i] = current[i];
                }
            }
        }

        let undecided = match config.mapping {
            MappingMode::None => n,
            MappingMode::Soft | MappingMode::Hard => {
                let d = match config.mapping {
                    MappingMode::Soft => d_schedule(iteration, config),
                    _ => 0.0,
                };
                let region = MappingRegion::new(T::lit(d), constellation);
                let undecided = region.apply(&mut next, &mut counter);
                if config.freeze_decided {
                    for (flag, z) in frozen.iter_mut().zip(&next) {
                        *flag = *flag || constellation.points().contains(z);
                    }
                }
                undecided
            }
        };
        per_iteration_undecided.push(undecided);
        if let (Some(b), Some(a)) = (before, counter.get()) {
            per_iteration_ops.push(OpCount::new(
                a.real_additions - b.real_additions,
                a.real_multiplications - b.real_multiplications,
            ));
        }
        current = next;
    }

    counter.charge(OpCount::comparisons(n * constellation.len()));
    let indices = hard_map(&current, constellation);
    let mut out = DetectorResult::from_indices(system, &r.r, indices, current);
    out.iterations_used = config.max_iterations;
    out.per_iteration_undecided = per_iteration_undecided;
    out.per_iteration_ops = per_iteration_ops;
    out.op_counts = counter.get();
    Ok(out)
}
