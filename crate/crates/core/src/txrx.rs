//! Transmitter, AWGN channel and matched-kernel correlator bank.
//!
//! The receiver projects onto the transmit kernels themselves, so the
//! correlator output is `R = F^H (F S + n) = M S + F^H n` and the noise at
//! its output is colored with covariance `sigma2 * M`.

use crate::complexity::{OpCount, OpCounter};
use crate::error::Result;
use crate::matrices::mat_vec;
use crate::scalar::{Cplx, Real};
use crate::system::SefdmSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Time-domain samples `X = F S` (possibly with noise added).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector<T> {
    pub samples: Vec<Cplx<T>>,
}

impl<T> SampleVector<T> {
    pub fn new(samples: Vec<Cplx<T>>) -> Self {
        Self { samples }
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }
}

/// Output `R` of the correlator bank.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorOutput<T> {
    pub r: Vec<Cplx<T>>,
    /// Channel SNR in dB; `+inf` for a noiseless observation.
    pub snr_db: f64,
    pub noise_seed: u64,
}

impl<T> CorrelatorOutput<T> {
    pub fn noiseless(r: Vec<Cplx<T>>) -> Self {
        Self {
            r,
            snr_db: f64::INFINITY,
            noise_seed: 0,
        }
    }

    pub fn with_noise(mut self, noise: &NoiseModel, seed: u64) -> Self {
        self.snr_db = noise.snr_db;
        self.noise_seed = seed;
        self
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

/// Complex AWGN with per-sample variance `sigma2`.
///
/// SNR is `Es/N0` per subcarrier symbol with unit symbol energy, so
/// `sigma2 = 10^(-snr_db / 10)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub snr_db: f64,
    pub sigma2: f64,
}

impl NoiseModel {
    pub fn from_snr_db(snr_db: f64) -> Self {
        Self {
            snr_db,
            sigma2: 10f64.powf(-snr_db / 10.0),
        }
    }

    pub fn from_sigma2(sigma2: f64) -> Self {
        Self {
            snr_db: -10.0 * sigma2.log10(),
            sigma2,
        }
    }

    pub fn noiseless() -> Self {
        Self {
            snr_db: f64::INFINITY,
            sigma2: 0.0,
        }
    }

    /// `Eb/N0` in dB for an alphabet with `bits_per_symbol` bits.
    pub fn ebn0_db(&self, bits_per_symbol: usize) -> f64 {
        self.snr_db - 10.0 * (bits_per_symbol as f64).log10()
    }
}

/// Adds circularly symmetric Gaussian noise drawn from a generator seeded
/// with `rng_seed`.
pub fn add_awgn<T: Real>(x: &SampleVector<T>, noise: &NoiseModel, rng_seed: u64) -> SampleVector<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    add_awgn_with(x, noise, &mut rng)
}

/// Adds noise drawing from a caller-owned generator. Each sample consumes
/// two standard normals (real then imaginary part).
pub fn add_awgn_with<T: Real, R: Rng + ?Sized>(
    x: &SampleVector<T>,
    noise: &NoiseModel,
    rng: &mut R,
) -> SampleVector<T> {
    if noise.sigma2 == 0.0 {
        return x.clone();
    }
    let std = (noise.sigma2 / 2.0).sqrt();
    let samples = x
        .samples
        .iter()
        .map(|z| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            z + Cplx::new(T::lit(std * re), T::lit(std * im))
        })
        .collect();
    SampleVector { samples }
}

/// Zero-padded `Q`-point transforms realizing `F` and `F^H` when
/// `Q = N / alpha` is an integer: `exp(j 2 pi alpha n k / N) = exp(j 2 pi n k / Q)`.
pub struct FastTransform<T: Real> {
    n: usize,
    q: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    scale: T,
}

impl<T: Real> FastTransform<T> {
    pub fn new(n: usize, q: usize) -> Self {
        let mut planner = FftPlanner::<T>::new();
        Self {
            n,
            q,
            forward: planner.plan_fft_forward(q),
            inverse: planner.plan_fft_inverse(q),
            scale: T::one() / T::from_count(n).sqrt(),
        }
    }

    pub fn size(&self) -> usize {
        self.q
    }

    fn run(&self, fft: &dyn Fft<T>, input: &[Cplx<T>], scale: T) -> Vec<Cplx<T>> {
        let mut buf = vec![Cplx::new(T::zero(), T::zero()); self.q];
        buf[..self.n].copy_from_slice(input);
        fft.process(&mut buf);
        buf.truncate(self.n);
        if scale != T::one() {
            for z in &mut buf {
                *z = z.scale(scale);
            }
        }
        buf
    }

    /// `F s`.
    pub fn modulate(&self, s: &[Cplx<T>]) -> Vec<Cplx<T>> {
        self.run(self.inverse.as_ref(), s, self.scale)
    }

    /// `F^H x`.
    pub fn correlate(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        self.run(self.forward.as_ref(), x, self.scale)
    }

    /// `N * M s`: one inverse and one forward transform, normalization left
    /// to the caller.
    pub fn gram_unscaled(&self, s: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let x = self.run(self.inverse.as_ref(), s, T::one());
        self.run(self.forward.as_ref(), &x, T::one())
    }
}

impl<T: Real> SefdmSystem<T> {
    /// `X = F S`, through the fast transform when available.
    pub fn modulate(&self, s: &[Cplx<T>]) -> Result<SampleVector<T>> {
        self.check_len(s.len())?;
        let samples = match self.fast_path() {
            Some(fast) => fast.modulate(s),
            None => self.matrices().apply_f(s),
        };
        Ok(SampleVector { samples })
    }

    /// Dense reference path for [`SefdmSystem::modulate`].
    pub fn modulate_direct(&self, s: &[Cplx<T>]) -> Result<SampleVector<T>> {
        self.check_len(s.len())?;
        Ok(SampleVector {
            samples: self.matrices().apply_f(s),
        })
    }

    /// `R = F^H x`.
    pub fn correlate(&self, x: &SampleVector<T>) -> Result<CorrelatorOutput<T>> {
        self.check_len(x.sample_count())?;
        let r = match self.fast_path() {
            Some(fast) => fast.correlate(&x.samples),
            None => self.matrices().apply_f_adjoint(&x.samples),
        };
        Ok(CorrelatorOutput::noiseless(r))
    }

    /// Dense reference path for [`SefdmSystem::correlate`].
    pub fn correlate_direct(&self, x: &SampleVector<T>) -> Result<CorrelatorOutput<T>> {
        self.check_len(x.sample_count())?;
        Ok(CorrelatorOutput::noiseless(self.matrices().apply_f_adjoint(&x.samples)))
    }

    /// Computes `scale * M s` and charges the work to `counter`.
    ///
    /// On the fast path the product is an unnormalized transform pair and the
    /// `1/N` normalization is folded into `scale`, so the caller's own
    /// real-by-complex multiplication absorbs it.
    pub(crate) fn gram_times(&self, s: &[Cplx<T>], counter: &mut OpCounter) -> (Vec<Cplx<T>>, T) {
        match self.fast_path() {
            Some(fast) => {
                counter.charge(OpCount::transform(fast.size()) * 2.0);
                (fast.gram_unscaled(s), T::one() / T::from_count(self.n()))
            }
            None => {
                counter.charge(OpCount::mat_vec(self.n(), self.n()));
                (mat_vec(self.gram(), s), T::one())
            }
        }
    }
}
