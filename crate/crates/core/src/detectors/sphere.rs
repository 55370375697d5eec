//! Regularized sphere decoder over the real-valued form of `R = M S`.
//!
//! The complex model is split into `y = H x` with `y = [Re R; Im R]` and one
//! real coordinate per in-phase / quadrature component. The decoder minimizes
//!
//! ```text
//! ||y - H x||^2 + epsilon ||x||^2 = ||U (x - c)||^2 + const
//! ```
//!
//! where `U^T U = H^T H + epsilon I` and `c` is the regularized least-squares
//! center. Schnorr-Euchner enumeration runs depth-first from the last
//! coordinate, visiting children in order of distance to their conditional
//! center and shrinking the radius to every improved leaf. With `epsilon = 0`
//! the result is the exact minimizer of `||R - M S||^2`; for constant-modulus
//! alphabets the penalty is the same for every candidate, so the argmin is
//! unchanged for any `epsilon` and only the numerics of the factorization
//! benefit.

use super::linear::zero_forcing;
use super::DetectorResult;
use crate::complexity::{OpCount, OpCounter};
use crate::constellation::Scheme;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::system::SefdmSystem;
use crate::txrx::CorrelatorOutput;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialRadius {
    /// Radius through the hard-decided zero-forcing point; the sphere is
    /// never empty.
    #[default]
    ZeroForcingPoint,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphereConfig {
    /// Diagonal loading of `H^T H`; `0` is plain ML sphere decoding.
    pub epsilon: f64,
    pub initial_radius: InitialRadius,
}

impl SphereConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    /// Regularized mode with loading equal to the noise variance.
    pub fn regularized(sigma2: f64) -> Self {
        Self {
            epsilon: sigma2,
            ..Self::default()
        }
    }
}

/// Factorized decoder for one system and loading; reusable across
/// observations.
pub struct SphereDecoder<'a, T: Real> {
    system: &'a SefdmSystem<T>,
    config: SphereConfig,
    h: DMatrix<T>,
    upper: DMatrix<T>,
    chol: Cholesky<T, Dyn>,
    /// Real alphabet shared by every coordinate.
    levels: Vec<T>,
    /// `true` when each symbol contributes an imaginary coordinate.
    complex_coords: bool,
}

impl<'a, T: Real> SphereDecoder<'a, T> {
    pub fn new(system: &'a SefdmSystem<T>, config: SphereConfig) -> Result<Self> {
        if !(config.epsilon >= 0.0 && config.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be finite and non-negative, got {}",
                config.epsilon
            )));
        }
        let n = system.n();
        let constellation = system.constellation();
        let a = constellation.coordinate();
        let (levels, complex_coords) = match constellation.scheme() {
            Scheme::Qam4 => (vec![a, -a], true),
            Scheme::Bpsk => (vec![a, -a], false),
        };
        let dims = if complex_coords { 2 * n } else { n };
        let gram = system.gram();
        let h = DMatrix::<T>::from_fn(2 * n, dims, |row, col| {
            let (sym, imag) = if complex_coords { (col / 2, col % 2 == 1) } else { (col, false) };
            let (k, im_row) = (row % n, row >= n);
            let m = gram[(k, sym)];
            // Re(M s) = Re M Re s - Im M Im s, Im(M s) = Im M Re s + Re M Im s
            match (im_row, imag) {
                (false, false) => m.re,
                (false, true) => -m.im,
                (true, false) => m.im,
                (true, true) => m.re,
            }
        });
        let mut g = h.transpose() * &h;
        let eps = T::lit(config.epsilon);
        for i in 0..dims {
            g[(i, i)] += eps;
        }
        let chol = Cholesky::new(g).ok_or_else(|| {
            Error::FactorizationFailed(format!(
                "M^H M + {} I is not positive definite (N={}, alpha={})",
                config.epsilon,
                n,
                system.alpha()
            ))
        })?;
        let upper = chol.l().transpose();
        if (0..dims).any(|i| !(upper[(i, i)] > T::zero())) {
            return Err(Error::FactorizationFailed("zero pivot in Cholesky factor".into()));
        }
        Ok(Self {
            system,
            config,
            h,
            upper,
            chol,
            levels,
            complex_coords,
        })
    }

    fn dims(&self) -> usize {
        self.h.ncols()
    }

    fn symbols_to_coords(&self, indices: &[usize]) -> Vec<T> {
        let c = self.system.constellation();
        let mut x = Vec::with_capacity(self.dims());
        for &i in indices {
            let p = c.point(i);
            x.push(p.re);
            if self.complex_coords {
                x.push(p.im);
            }
        }
        x
    }

    fn coords_to_indices(&self, x: &[T]) -> Vec<usize> {
        let c = self.system.constellation();
        let n = self.system.n();
        (0..n)
            .map(|sym| {
                let z = if self.complex_coords {
                    Cplx::new(x[2 * sym], x[2 * sym + 1])
                } else {
                    Cplx::new(x[sym], T::zero())
                };
                c.nearest(z)
            })
            .collect()
    }

    /// `||U (x - c)||^2`.
    fn whitened_distance(&self, x: &[T], center: &DVector<T>) -> T {
        let dims = self.dims();
        let mut total = T::zero();
        for i in 0..dims {
            let mut row = T::zero();
            for j in i..dims {
                row += self.upper[(i, j)] * (x[j] - center[j]);
            }
            total += row * row;
        }
        total
    }

    pub fn detect(&self, r: &CorrelatorOutput<T>) -> Result<DetectorResult<T>> {
        let system = self.system;
        system.check_len(r.len())?;
        let n = system.n();
        let dims = self.dims();
        let mut counter = OpCounter::new(system.counting());

        let y = DVector::<T>::from_iterator(2 * n, r.r.iter().map(|z| z.re).chain(r.r.iter().map(|z| z.im)));
        let b = self.h.tr_mul(&y);
        let center = self.chol.solve(&b);
        counter.charge(OpCount::new(
            (dims * (2 * n - 1) + dims * dims) as f64,
            (dims * 2 * n + dims * dims) as f64,
        ));

        let mut best: Option<Vec<T>> = None;
        let mut best_dist = T::max_value().expect("bounded float");
        if self.config.initial_radius == InitialRadius::ZeroForcingPoint {
            let start = match zero_forcing(&r.r, system, &mut counter) {
                Ok(s0) => s0,
                Err(Error::IllConditioned { .. }) => self.center_as_symbols(&center),
                Err(e) => return Err(e),
            };
            let c = system.constellation();
            counter.charge(OpCount::comparisons(n * c.len()));
            let idx: Vec<usize> = start.iter().map(|&z| c.nearest(z)).collect();
            let x0 = self.symbols_to_coords(&idx);
            best_dist = self.whitened_distance(&x0, &center);
            best = Some(x0);
        }

        let levels = &self.levels;
        let u = &self.upper;
        let mut x = vec![T::zero(); dims];
        // partial distance above each level; pd[dims] = 0
        let mut pd = vec![T::zero(); dims + 1];
        let mut order: Vec<Vec<usize>> = vec![Vec::with_capacity(levels.len()); dims];
        let mut pos = vec![0usize; dims];
        let mut cond_center = vec![T::zero(); dims];
        let mut visited: u64 = 0;

        let prepare = |i: usize, x: &[T], order: &mut Vec<usize>, counter: &mut OpCounter| -> T {
            let mut acc = T::zero();
            for j in i + 1..dims {
                acc += u[(i, j)] * (x[j] - center[j]);
            }
            counter.charge(OpCount::new((2 * (dims - 1 - i)) as f64, (dims - i) as f64));
            let z = center[i] - acc / u[(i, i)];
            order.clear();
            order.extend(0..levels.len());
            order.sort_by(|&p, &q| {
                (levels[p] - z)
                    .magnitude()
                    .partial_cmp(&(levels[q] - z).magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            z
        };

        let mut i = dims - 1;
        cond_center[i] = prepare(i, &x, &mut order[i], &mut counter);
        pos[i] = 0;
        loop {
            if pos[i] < order[i].len() {
                let v = levels[order[i][pos[i]]];
                pos[i] += 1;
                visited += 1;
                counter.charge(OpCount::new(2.0, 2.0));
                let t = u[(i, i)] * (v - cond_center[i]);
                let dist = pd[i + 1] + t * t;
                if dist < best_dist {
                    x[i] = v;
                    pd[i] = dist;
                    if i == 0 {
                        best_dist = dist;
                        best = Some(x.clone());
                    } else {
                        i -= 1;
                        cond_center[i] = prepare(i, &x, &mut order[i], &mut counter);
                        pos[i] = 0;
                    }
                } else {
                    // children are sorted by distance: the rest are outside too
                    pos[i] = order[i].len();
                }
            } else if i + 1 == dims {
                break;
            } else {
                i += 1;
            }
        }

        let best = best.ok_or_else(|| Error::FactorizationFailed("sphere search found no candidate".into()))?;
        let indices = self.coords_to_indices(&best);
        let raw = indices.iter().map(|&k| system.constellation().point(k)).collect();
        let mut out = DetectorResult::from_indices(system, &r.r, indices, raw);
        out.visited_nodes = visited;
        out.op_counts = counter.get();
        Ok(out)
    }

    /// Babai point of the regularized center, used when zero-forcing is
    /// unavailable.
    fn center_as_symbols(&self, center: &DVector<T>) -> Vec<Cplx<T>> {
        let n = self.system.n();
        (0..n)
            .map(|sym| {
                if self.complex_coords {
                    Cplx::new(center[2 * sym], center[2 * sym + 1])
                } else {
                    Cplx::new(center[sym], T::zero())
                }
            })
            .collect()
    }
}

/// One-shot sphere detection; builds the factorization for this call.
pub fn sphere_detect<T: Real>(
    r: &CorrelatorOutput<T>,
    system: &SefdmSystem<T>,
    config: &SphereConfig,
) -> Result<DetectorResult<T>> {
    SphereDecoder::new(system, *config)?.detect(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SefdmConfig;
    use crate::detectors::{ml_detect, soft_map, MappingRegion, MlConfig};
    use crate::txrx::{add_awgn, NoiseModel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Cplx<f64>;

    fn system(n: usize, alpha: f64, scheme: Scheme) -> SefdmSystem<f64> {
        SefdmSystem::new(SefdmConfig::new(n, alpha, scheme).unwrap()).unwrap()
    }

    fn received(sys: &SefdmSystem<f64>, snr_db: f64, rng: &mut ChaCha8Rng) -> (Vec<C>, CorrelatorOutput<f64>) {
        let l = sys.constellation().len();
        let s: Vec<C> = (0..sys.n()).map(|_| sys.constellation().point(rng.random_range(0..l))).collect();
        let seed = rng.random();
        let x = add_awgn(&sys.modulate(&s).unwrap(), &NoiseModel::from_snr_db(snr_db), seed);
        (s, sys.correlate(&x).unwrap())
    }

    #[test]
    fn exact_mode_agrees_with_ml() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, alpha, scheme) in &[(4, 0.8, Scheme::Qam4), (4, 0.9, Scheme::Qam4), (6, 0.7, Scheme::Bpsk), (5, 0.75, Scheme::Qam4)] {
            let sys = system(n, alpha, scheme);
            let sd = SphereDecoder::new(&sys, SphereConfig::exact()).unwrap();
            for _ in 0..100 {
                let (_, r) = received(&sys, 4.0, &mut rng);
                let a = sd.detect(&r).unwrap();
                let b = ml_detect(&r, &sys, &MlConfig::default()).unwrap();
                assert_eq!(a.indices, b.indices);
                assert!((a.metric - b.metric).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn unbounded_radius_agrees_with_zf_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let sys = system(8, 0.85, Scheme::Qam4);
        let seeded = SphereDecoder::new(&sys, SphereConfig::exact()).unwrap();
        let open = SphereDecoder::new(
            &sys,
            SphereConfig { epsilon: 0.0, initial_radius: InitialRadius::Unbounded },
        )
        .unwrap();
        for _ in 0..50 {
            let (_, r) = received(&sys, 6.0, &mut rng);
            assert_eq!(seeded.detect(&r).unwrap().indices, open.detect(&r).unwrap().indices);
        }
    }

    #[test]
    fn regularization_keeps_constant_modulus_argmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let sys = system(4, 0.75, Scheme::Qam4);
        let exact = SphereDecoder::new(&sys, SphereConfig::exact()).unwrap();
        let reg = SphereDecoder::new(&sys, SphereConfig::regularized(0.3)).unwrap();
        for _ in 0..100 {
            let (_, r) = received(&sys, 3.0, &mut rng);
            assert_eq!(exact.detect(&r).unwrap().indices, reg.detect(&r).unwrap().indices);
        }
    }

    #[test]
    fn orthogonal_case_is_symbolwise_decision() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let sys = system(8, 1.0, Scheme::Qam4);
        for _ in 0..50 {
            let (_, r) = received(&sys, 2.0, &mut rng);
            let res = sphere_detect(&r, &sys, &SphereConfig::exact()).unwrap();
            let hard = soft_map(&r.r, &MappingRegion::new(0.0, sys.constellation()));
            assert_eq!(res.symbols, hard);
        }
    }

    #[test]
    fn fewer_nodes_at_high_snr() {
        let sys = system(8, 0.85, Scheme::Qam4);
        let sd = SphereDecoder::new(&sys, SphereConfig::exact()).unwrap();
        let median = |snr: f64, seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<u64> = (0..200)
                .map(|_| sd.detect(&received(&sys, snr, &mut rng).1).unwrap().visited_nodes)
                .collect();
            v.sort_unstable();
            v[100]
        };
        let high = median(20.0, 1);
        let low = median(0.0, 2);
        assert!(high <= low, "high={high} low={low}");
    }

    #[test]
    fn singular_gram_fails_factorization() {
        // alpha small enough that M^H M loses positive definiteness numerically
        let sys = system(16, 0.02, Scheme::Qam4);
        let err = SphereDecoder::new(&sys, SphereConfig::exact()).err().expect("must fail");
        assert!(matches!(err, Error::FactorizationFailed(_)));
        assert!(SphereDecoder::new(&sys, SphereConfig::regularized(0.1)).is_ok());
    }

    #[test]
    fn rejects_negative_epsilon() {
        let sys = system(4, 0.8, Scheme::Qam4);
        assert!(SphereDecoder::new(&sys, SphereConfig { epsilon: -1.0, ..Default::default() }).is_err());
    }
}
