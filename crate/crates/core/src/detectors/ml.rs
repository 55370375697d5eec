use super::DetectorResult;
use crate::complexity::{OpCount, OpCounter};
use crate::error::{Error, Result};
use crate::matrices::mat_vec;
use crate::scalar::{dist_sqr, Cplx, Real};
use crate::system::SefdmSystem;
use crate::txrx::CorrelatorOutput;

/// Default cap on `L^N` for exhaustive search.
pub const DEFAULT_SEARCH_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MlConfig {
    pub search_cap: u128,
}

impl Default for MlConfig {
    fn default() -> Self {
        Self {
            search_cap: DEFAULT_SEARCH_CAP,
        }
    }
}

/// Exhaustive minimization of `||R - M S||^2` over all `L^N` vectors.
///
/// Candidates are visited in lexicographic order of their index digits
/// (first subcarrier most significant); only a strictly smaller metric
/// replaces the incumbent, so ties resolve to the smallest candidate index.
pub fn ml_detect<T: Real>(
    r: &CorrelatorOutput<T>,
    system: &SefdmSystem<T>,
    config: &MlConfig,
) -> Result<DetectorResult<T>> {
    system.check_len(r.len())?;
    let n = system.n();
    let constellation = system.constellation();
    let l = constellation.len();
    let candidates = (l as u128)
        .checked_pow(n as u32)
        .filter(|&c| c <= config.search_cap)
        .ok_or(Error::SearchSpaceTooLarge {
            candidates: (l as u128).saturating_pow(n as u32),
            cap: config.search_cap,
        })?;

    let mut counter = OpCounter::new(system.counting());
    // per candidate: M s, the residual and its squared norm
    let per_candidate = OpCount::mat_vec(n, n)
        + OpCount::complex_add(n)
        + OpCount::new((2 * n - 1) as f64, (2 * n) as f64);

    let mut digits = vec![0usize; n];
    let mut candidate: Vec<Cplx<T>> = vec![constellation.point(0); n];
    let mut best_digits = digits.clone();
    let mut best_metric: Option<T> = None;
    for _ in 0..candidates {
        let metric = dist_sqr(&r.r, &mat_vec(system.gram(), &candidate));
        counter.charge(per_candidate);
        if best_metric.is_none_or(|b| metric < b) {
            best_metric = Some(metric);
            best_digits.copy_from_slice(&digits);
        }
        // odometer increment, last subcarrier fastest
        for pos in (0..n).rev() {
            digits[pos] += 1;
            if digits[pos] < l {
                candidate[pos] = constellation.point(digits[pos]);
                break;
            }
            digits[pos] = 0;
            candidate[pos] = constellation.point(0);
        }
    }

    let raw = best_digits.iter().map(|&i| constellation.point(i)).collect();
    let mut out = DetectorResult::from_indices(system, &r.r, best_digits, raw);
    out.op_counts = counter.get();
    out.visited_nodes = candidates as u64;
    Ok(out)
}
