//! Immutable per-configuration context shared by the transceiver and the
//! detectors.

use crate::config::SefdmConfig;
use crate::constellation::{make_constellation, Constellation};
use crate::error::{Error, Result};
use crate::matrices::{carrier_matrix, CMatrix, CarrierMatrices};
use crate::scalar::{Cplx, Real};
use crate::txrx::FastTransform;
use nalgebra::{DVector, Dyn, LU};

/// Reciprocal condition of `F` below which zero-forcing is refused.
pub const MIN_F_RCOND: f64 = 1e-12;

/// How products with `F`, `F^H` and `M` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformPath {
    /// Fast transform when `N / alpha` is an integer, dense products otherwise.
    #[default]
    Auto,
    Direct,
}

/// Everything derived from a [`SefdmConfig`]: alphabet, carrier matrices,
/// transform plans and the zero-forcing factorizations.
pub struct SefdmSystem<T: Real> {
    config: SefdmConfig,
    constellation: Constellation<T>,
    matrices: CarrierMatrices<T>,
    fast: Option<FastTransform<T>>,
    path: TransformPath,
    zf: Option<ZfFactors<T>>,
    count_ops: bool,
}

pub(crate) struct ZfFactors<T: Real> {
    pub f: LU<Cplx<T>, Dyn, Dyn>,
    pub f_adjoint: LU<Cplx<T>, Dyn, Dyn>,
}

impl<T: Real> SefdmSystem<T> {
    pub fn new(config: SefdmConfig) -> Result<Self> {
        Self::with_path(config, TransformPath::Auto)
    }

    pub fn with_path(config: SefdmConfig, path: TransformPath) -> Result<Self> {
        config.validate()?;
        let matrices = carrier_matrix::<T>(&config);
        let fast = config
            .fast_transform_size()
            .map(|q| FastTransform::new(config.n_carriers, q));
        let zf = (matrices.f_rcond >= MIN_F_RCOND).then(|| ZfFactors {
            f: matrices.f_matrix.clone().lu(),
            f_adjoint: matrices.f_matrix.adjoint().lu(),
        });
        Ok(Self {
            config,
            constellation: make_constellation(config.constellation),
            matrices,
            fast,
            path,
            zf,
            count_ops: true,
        })
    }

    /// Enables or disables operation counting for every detector run on
    /// this system.
    pub fn with_counting(mut self, enabled: bool) -> Self {
        self.count_ops = enabled;
        self
    }

    pub fn config(&self) -> &SefdmConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n_carriers
    }

    pub fn alpha(&self) -> f64 {
        self.config.alpha
    }

    pub fn constellation(&self) -> &Constellation<T> {
        &self.constellation
    }

    pub fn matrices(&self) -> &CarrierMatrices<T> {
        &self.matrices
    }

    pub fn gram(&self) -> &CMatrix<T> {
        &self.matrices.gram
    }

    pub fn counting(&self) -> bool {
        self.count_ops
    }

    /// Fast-transform plans, if this system uses them.
    pub fn fast_path(&self) -> Option<&FastTransform<T>> {
        match self.path {
            TransformPath::Auto => self.fast.as_ref(),
            TransformPath::Direct => None,
        }
    }

    pub(crate) fn zf_factors(&self) -> Result<&ZfFactors<T>> {
        self.zf.as_ref().ok_or(Error::IllConditioned {
            n: self.config.n_carriers,
            alpha: self.config.alpha,
            rcond: self.matrices.f_rcond,
        })
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: len,
            })
        }
    }
}

pub(crate) fn to_dvector<T: Real>(v: &[Cplx<T>]) -> DVector<Cplx<T>> {
    DVector::from_column_slice(v)
}
