//! Real-addition / real-multiplication accounting.
//!
//! Predictions evaluate the closed-form per-block and per-iteration costs;
//! measurements accumulate the same unit costs while a detector runs:
//!
//! | operation                              | RA        | RM       |
//! |----------------------------------------|-----------|----------|
//! | complex x complex multiplication       | 2         | 4        |
//! | real x complex multiplication          | 0         | 2        |
//! | complex addition / subtraction         | 2         | 0        |
//! | `q`-point fast transform               | 3 q log2 q| q log2 q |
//! | comparison against a constellation pt. | 1         | 0        |
//!
//! A forward/inverse transform pair therefore costs `6 q log2 q` RA and
//! `2 q log2 q` RM.

use crate::detectors::DetectorResult;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OpCount {
    pub real_additions: f64,
    pub real_multiplications: f64,
}

impl OpCount {
    pub const ZERO: OpCount = OpCount {
        real_additions: 0.0,
        real_multiplications: 0.0,
    };

    pub fn new(real_additions: f64, real_multiplications: f64) -> Self {
        Self {
            real_additions,
            real_multiplications,
        }
    }

    pub fn complex_mul(count: usize) -> Self {
        Self::new(2.0 * count as f64, 4.0 * count as f64)
    }

    pub fn real_by_complex_mul(count: usize) -> Self {
        Self::new(0.0, 2.0 * count as f64)
    }

    pub fn complex_add(count: usize) -> Self {
        Self::new(2.0 * count as f64, 0.0)
    }

    pub fn transform(points: usize) -> Self {
        let q = points as f64;
        let work = q * q.log2();
        Self::new(3.0 * work, work)
    }

    pub fn comparisons(count: usize) -> Self {
        Self::new(count as f64, 0.0)
    }

    /// Dense `rows x cols` complex matrix-vector product.
    pub fn mat_vec(rows: usize, cols: usize) -> Self {
        Self::complex_mul(rows * cols) + Self::complex_add(rows * cols.saturating_sub(1))
    }

    pub fn total(&self) -> f64 {
        self.real_additions + self.real_multiplications
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(self, rhs: OpCount) -> OpCount {
        OpCount::new(
            self.real_additions + rhs.real_additions,
            self.real_multiplications + rhs.real_multiplications,
        )
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        *self = *self + rhs;
    }
}

impl Mul<f64> for OpCount {
    type Output = OpCount;

    fn mul(self, k: f64) -> OpCount {
        OpCount::new(self.real_additions * k, self.real_multiplications * k)
    }
}

impl fmt::Display for OpCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RA={} RM={}", self.real_additions, self.real_multiplications)
    }
}

/// Per-call accumulator. A disabled counter ignores every charge.
#[derive(Debug, Clone, Copy, Default)]
pub struct OpCounter {
    total: Option<OpCount>,
}

impl OpCounter {
    pub fn new(enabled: bool) -> Self {
        Self {
            total: enabled.then_some(OpCount::ZERO),
        }
    }

    #[inline]
    pub fn charge(&mut self, ops: OpCount) {
        if let Some(t) = self.total.as_mut() {
            *t += ops;
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.total.is_some()
    }

    pub fn get(&self) -> Option<OpCount> {
        self.total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Ml,
    /// Sphere decoding with the exponent `L^(gamma N)` supplied by the caller.
    Sd,
    IterativePerIteration,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ml" => Ok(Method::Ml),
            "sd" => Ok(Method::Sd),
            "iterative" | "iter" => Ok(Method::IterativePerIteration),
            other => Err(format!("unknown method '{other}' (expected ml, sd or iterative)")),
        }
    }
}

/// Closed-form operation counts.
///
/// `sd_gamma` is only read for [`Method::Sd`]; it scales the exponent of
/// the candidate count from `L^N` down to `L^(gamma N)`.
pub fn predicted_ops(method: Method, n: usize, alpha: f64, l: usize, sd_gamma: f64) -> OpCount {
    let nf = n as f64;
    let lf = l as f64;
    let log_q = (nf / alpha).log2();
    match method {
        Method::Ml | Method::Sd => {
            let exponent = if method == Method::Ml { nf } else { sd_gamma * nf };
            let blocks = lf.powf(exponent);
            let base = 2.0 * blocks * nf / alpha;
            OpCount::new(base * (3.0 * log_q + 2.0 * alpha), base * (log_q + alpha))
        }
        Method::IterativePerIteration => OpCount::new(
            nf * (lf + 4.0 + (6.0 / alpha) * log_q),
            nf * ((2.0 / alpha) * log_q + 2.0),
        ),
    }
}

/// Prediction and (optionally) measurement for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub method: Method,
    pub predicted: OpCount,
    pub measured: Option<OpCount>,
    /// Measured (or predicted, when unmeasured) total over the predicted
    /// per-iteration total of the iterative detector.
    pub ratio_vs_iteration: Option<f64>,
    /// Empirical exponent `gamma` for sphere decoding, when measured.
    pub sd_gamma_estimate: Option<f64>,
}

impl ComplexityReport {
    pub fn new(method: Method, predicted: OpCount, measured: Option<OpCount>) -> Self {
        Self {
            method,
            predicted,
            measured,
            ratio_vs_iteration: None,
            sd_gamma_estimate: None,
        }
    }

    /// Fills `ratio_vs_iteration` against an iterative per-iteration count.
    pub fn with_iteration_baseline(mut self, per_iteration: OpCount) -> Self {
        let mine = self.measured.unwrap_or(self.predicted);
        if per_iteration.total() > 0.0 {
            self.ratio_vs_iteration = Some(mine.total() / per_iteration.total());
        }
        self
    }
}

/// Operation count accumulated during a detector run.
pub fn measure_ops<T>(detector_run: &DetectorResult<T>) -> Result<OpCount> {
    detector_run.op_counts.ok_or(Error::CountingDisabled)
}

/// Measured cost of the `index`-th (1-based) iteration of an iterative run.
pub fn measure_iteration_ops<T>(detector_run: &DetectorResult<T>, index: usize) -> Result<OpCount> {
    if detector_run.op_counts.is_none() {
        return Err(Error::CountingDisabled);
    }
    index
        .checked_sub(1)
        .and_then(|i| detector_run.per_iteration_ops.get(i))
        .copied()
        .ok_or_else(|| Error::InvalidConfig(format!("run has no iteration {index}")))
}

/// Empirical sphere-decoder exponent: `visited = L^(gamma N)`.
pub fn sd_gamma_from_visits(visited_nodes: f64, n: usize, l: usize) -> f64 {
    if visited_nodes <= 1.0 {
        return 0.0;
    }
    visited_nodes.ln() / (n as f64 * (l as f64).ln())
}
