use super::mapping::hard_map;
use super::DetectorResult;
use crate::complexity::{OpCount, OpCounter};
use crate::error::Result;
use crate::scalar::{Cplx, Real};
use crate::system::{to_dvector, SefdmSystem};
use crate::txrx::CorrelatorOutput;

/// Zero-forcing estimate `S0 = F^-1 (F^-H R) = M^-1 R`.
///
/// `F^-H R` recovers the time-domain samples from the correlator output and
/// `F^-1` inverts the modulation. Both steps are triangular solves against
/// LU factors prepared with the system. In the orthogonal case `M = I` and
/// `R` is returned as is.
///
/// Fails with `IllConditioned` when the reciprocal condition of `F` is
/// below [`crate::system::MIN_F_RCOND`].
pub fn initial_estimate<T: Real>(
    r: &CorrelatorOutput<T>,
    system: &SefdmSystem<T>,
) -> Result<Vec<Cplx<T>>> {
    zero_forcing(&r.r, system, &mut OpCounter::new(false))
}

pub(crate) fn zero_forcing<T: Real>(
    r: &[Cplx<T>],
    system: &SefdmSystem<T>,
    counter: &mut OpCounter,
) -> Result<Vec<Cplx<T>>> {
    system.check_len(r.len())?;
    let factors = system.zf_factors()?;
    if system.config().is_orthogonal() {
        return Ok(r.to_vec());
    }
    let n = system.n();
    // a pre-factored solve is charged as one dense matrix-vector product
    counter.charge(OpCount::mat_vec(n, n) * 2.0);
    let samples = factors
        .f_adjoint
        .solve(&to_dvector(r))
        .expect("LU of a well-conditioned F is invertible");
    let s0 = factors
        .f
        .solve(&samples)
        .expect("LU of a well-conditioned F is invertible");
    Ok(s0.iter().copied().collect())
}

/// Zero-forcing followed by a hard decision.
pub fn zf_detect<T: Real>(
    r: &CorrelatorOutput<T>,
    system: &SefdmSystem<T>,
) -> Result<DetectorResult<T>> {
    let mut counter = OpCounter::new(system.counting());
    let s0 = zero_forcing(&r.r, system, &mut counter)?;
    counter.charge(OpCount::comparisons(s0.len() * system.constellation().len()));
    let indices = hard_map(&s0, system.constellation());
    let mut out = DetectorResult::from_indices(system, &r.r, indices, s0);
    out.op_counts = counter.get();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SefdmConfig;
    use crate::error::Error;
    use crate::scalar::max_rel_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Cplx<f64>;

    fn system(n: usize, alpha: f64) -> SefdmSystem<f64> {
        SefdmSystem::new(SefdmConfig::qam4(n, alpha).unwrap()).unwrap()
    }

    fn noiseless(sys: &SefdmSystem<f64>, s: &[C]) -> CorrelatorOutput<f64> {
        sys.correlate(&sys.modulate(s).unwrap()).unwrap()
    }

    #[test]
    fn orthogonal_recovers_symbols() {
        let sys = system(8, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s: Vec<C> = (0..8).map(|_| C::new(rng.random(), rng.random())).collect();
        let s0 = initial_estimate(&noiseless(&sys, &s), &sys).unwrap();
        assert!(max_rel_diff(&s0, &s) < 1e-10);
    }

    #[test]
    fn half_spacing_first_column() {
        let sys = system(2, 0.5);
        let r = CorrelatorOutput::noiseless(vec![C::new(1.0, 0.0), C::new(0.5, -0.5)]);
        let s0 = initial_estimate(&r, &sys).unwrap();
        assert!((s0[0] - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!(s0[1].norm() < 1e-12);
    }

    #[test]
    fn matches_dense_gram_solve() {
        let sys = system(8, 0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let s: Vec<C> = (0..8)
                .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let r = noiseless(&sys, &s);
            let s0 = initial_estimate(&r, &sys).unwrap();
            // oracle: direct dense solve of M x = R
            let oracle = sys.gram().clone().lu().solve(&to_dvector(&r.r)).unwrap();
            let oracle: Vec<C> = oracle.iter().copied().collect();
            assert!(max_rel_diff(&s0, &oracle) < 1e-8);
            assert!(max_rel_diff(&s0, &s) < 1e-8);
        }
    }

    #[test]
    fn rejects_ill_conditioned_carriers() {
        // alpha tiny: F columns nearly collinear
        let sys = system(16, 0.05);
        let r = CorrelatorOutput::noiseless(vec![C::new(0.0, 0.0); 16]);
        match initial_estimate(&r, &sys) {
            Err(Error::IllConditioned { n, alpha, .. }) => {
                assert_eq!(n, 16);
                assert_eq!(alpha, 0.05);
            }
            other => panic!("expected IllConditioned, got {other:?}"),
        }
    }

    #[test]
    fn zf_orthogonal_counts_only_comparisons() {
        let sys = system(8, 1.0);
        let s: Vec<C> = sys.constellation().points().iter().cycle().take(8).copied().collect();
        let res = zf_detect(&noiseless(&sys, &s), &sys).unwrap();
        assert_eq!(res.symbols, s);
        assert_eq!(res.op_counts, Some(OpCount::comparisons(32)));
    }
}
