use super::IterativeConfig;
use crate::complexity::{OpCount, OpCounter};
use crate::constellation::Constellation;
use crate::scalar::{Cplx, Real};
use serde::{Deserialize, Serialize};

/// How the soft-decision parameter evolves over the iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Linear ramp from `d_start` at the first iteration to `d_end` at the last.
    #[default]
    LinearDecreasing,
    Constant,
}

/// Decision areas `A_l` of a constellation for a given width parameter `d`.
///
/// `d` is measured in units of the per-axis coordinate `A` of the alphabet.
/// `d = 0` leaves no undecided band (hard decision); larger `d` widens the
/// band around the decision boundaries.
#[derive(Debug, Clone, Copy)]
pub struct MappingRegion<'a, T> {
    pub d: T,
    pub constellation: &'a Constellation<T>,
}

impl<'a, T: Real> MappingRegion<'a, T> {
    pub fn new(d: T, constellation: &'a Constellation<T>) -> Self {
        Self { d, constellation }
    }

    /// Maps entries in place and returns how many stayed undecided. Each
    /// entry is charged one comparison per constellation point.
    pub(crate) fn apply(&self, s: &mut [Cplx<T>], counter: &mut OpCounter) -> usize {
        counter.charge(OpCount::comparisons(s.len() * self.constellation.len()));
        let mut undecided = 0;
        for z in s.iter_mut() {
            match self.constellation.region(*z, self.d) {
                Some(l) => *z = self.constellation.point(l),
                None => undecided += 1,
            }
        }
        undecided
    }
}

/// Entrywise soft mapping: entries inside some `A_l` snap to `C_l`, all
/// others pass through unchanged.
pub fn soft_map<T: Real>(s: &[Cplx<T>], region: &MappingRegion<'_, T>) -> Vec<Cplx<T>> {
    let mut out = s.to_vec();
    region.apply(&mut out, &mut OpCounter::new(false));
    out
}

/// Nearest-point indices (ties toward the smallest index).
pub fn hard_map<T: Real>(s: &[Cplx<T>], constellation: &Constellation<T>) -> Vec<usize> {
    s.iter().map(|&z| constellation.nearest(z)).collect()
}

/// Soft-decision parameter for `iteration` (1-based).
pub fn d_schedule(iteration: usize, config: &IterativeConfig) -> f64 {
    let max = config.max_iterations;
    debug_assert!(iteration >= 1 && iteration <= max);
    match config.schedule {
        Schedule::Constant => config.d_start,
        Schedule::LinearDecreasing if max <= 1 => config.d_end,
        Schedule::LinearDecreasing => {
            config.d_start + (config.d_end - config.d_start) * (iteration - 1) as f64 / (max - 1) as f64
        }
    }
}
