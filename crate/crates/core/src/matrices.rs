//! Carrier matrix `F` and the correlator Gram matrix `M = F^H F`.

use crate::config::SefdmConfig;
use crate::scalar::{Cplx, Real};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Dense complex matrix over a [`Real`] scalar.
pub type CMatrix<T> = DMatrix<Cplx<T>>;

#[derive(Debug, Clone)]
pub struct CarrierMatrices<T: Real> {
    /// `f[(k, n)] = exp(j 2 pi alpha n k / N) / sqrt(N)`; rows are sample
    /// instants, columns are subcarriers.
    pub f_matrix: CMatrix<T>,
    /// `M = F^H F`.
    pub gram: CMatrix<T>,
    /// `sigma_max(M) / sigma_min(M)`; infinite when `M` is numerically singular.
    pub condition_estimate: f64,
    /// `sigma_min(F) / sigma_max(F)`.
    pub f_rcond: f64,
}

/// Builds `F` entrywise and derives `M` and its conditioning.
pub fn carrier_matrix<T: Real>(config: &SefdmConfig) -> CarrierMatrices<T> {
    let n = config.n_carriers;
    let scale = 1.0 / (n as f64).sqrt();
    // phases evaluated in f64 regardless of T
    let f_matrix = CMatrix::<T>::from_fn(n, n, |k, col| {
        let phase = 2.0 * PI * config.alpha * (col * k) as f64 / n as f64;
        Cplx::new(T::lit(scale * phase.cos()), T::lit(scale * phase.sin()))
    });
    let gram = f_matrix.adjoint() * &f_matrix;
    let condition_estimate = extreme_ratio(&gram, true);
    let f_rcond = extreme_ratio(&f_matrix, false);
    CarrierMatrices {
        f_matrix,
        gram,
        condition_estimate,
        f_rcond,
    }
}

/// `sigma_max / sigma_min` (`max_over_min`) or its reciprocal.
fn extreme_ratio<T: Real>(m: &CMatrix<T>, max_over_min: bool) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().map(|s| s.to_f64_lossy()).fold(0.0_f64, f64::max);
    let min = sv.iter().map(|s| s.to_f64_lossy()).fold(f64::INFINITY, f64::min);
    if max_over_min {
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    } else if max <= 0.0 {
        0.0
    } else {
        min / max
    }
}

impl<T: Real> CarrierMatrices<T> {
    pub fn size(&self) -> usize {
        self.f_matrix.nrows()
    }

    /// `F * s`.
    pub fn apply_f(&self, s: &[Cplx<T>]) -> Vec<Cplx<T>> {
        mat_vec(&self.f_matrix, s)
    }

    /// `F^H * x`.
    pub fn apply_f_adjoint(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.size();
        (0..n)
            .map(|col| {
                (0..n).fold(Cplx::new(T::zero(), T::zero()), |acc, k| {
                    acc + self.f_matrix[(k, col)].conj() * x[k]
                })
            })
            .collect()
    }

    /// `M * s`.
    pub fn apply_gram(&self, s: &[Cplx<T>]) -> Vec<Cplx<T>> {
        mat_vec(&self.gram, s)
    }

    /// Spectral radius of `I - lambda * M`.
    pub fn iteration_spectral_radius(&self, lambda: f64) -> f64 {
        let eig = self.gram.clone().symmetric_eigen().eigenvalues;
        eig.iter()
            .map(|e| (1.0 - lambda * e.to_f64_lossy()).abs())
            .fold(0.0_f64, f64::max)
    }
}

pub(crate) fn mat_vec<T: Real>(m: &CMatrix<T>, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
    debug_assert_eq!(m.ncols(), v.len());
    (0..m.nrows())
        .map(|r| {
            v.iter()
                .enumerate()
                .fold(Cplx::new(T::zero(), T::zero()), |acc, (c, x)| acc + m[(r, c)] * x)
        })
        .collect()
}
