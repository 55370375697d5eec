//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! The carrier model, transceiver and detectors are written once against
//! [`Real`] and instantiated for `f32` and `f64`. `Real` collects the
//! nalgebra field traits (dense factorizations), the rustfft sample trait
//! (fast transforms) and the num-traits conversions used for constants.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar usable by the whole simulation stack.
pub trait Real: RealField + FftNum + FromPrimitive + ToPrimitive + Copy {
    /// Converts an `f64` constant into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Converts a count into this scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    /// Lossy widening to `f64`, used for reporting and statistics.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute value. Spelled out because `Signed` and `ComplexField`
    /// both provide an `abs` method.
    #[inline]
    fn magnitude(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl<T> Real for T where T: RealField + FftNum + FromPrimitive + ToPrimitive + Copy {}

/// Complex sample over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

/// Squared Euclidean norm of a complex vector.
pub fn norm_sqr<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// Squared Euclidean distance between two complex vectors of equal length.
pub fn dist_sqr<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + (x - y).norm_sqr())
}

/// Returns `max |a_i - b_i| / max(1, max |b_i|)`.
pub fn max_rel_diff<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> f64 {
    let scale = b
        .iter()
        .map(|z| z.norm_sqr().sqrt().to_f64_lossy())
        .fold(1.0_f64, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr().sqrt().to_f64_lossy())
        .fold(0.0_f64, f64::max)
        / scale
}
