//! Unit-energy Gray-labeled alphabets and their decision geometry.

use crate::scalar::{Cplx, Real};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Supported symbol alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Qam4,
    Bpsk,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Qam4 => "qam4",
            Scheme::Bpsk => "bpsk",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qam4" | "4qam" | "qpsk" => Ok(Scheme::Qam4),
            "bpsk" => Ok(Scheme::Bpsk),
            other => Err(format!("unknown constellation '{other}' (expected qam4 or bpsk)")),
        }
    }
}

/// A constellation `C_1..C_L`.
///
/// Point `l` carries the bit label `labels[l]`; for the built-in schemes the
/// label of a point equals its index, so mapping bits to a symbol index is the
/// identity on the packed label. The most significant label bit is the first
/// transmitted bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation<T> {
    scheme: Scheme,
    points: Vec<Cplx<T>>,
    labels: Vec<u32>,
    bits_per_symbol: usize,
}

/// Builds the unit-energy constellation for `scheme`.
pub fn make_constellation<T: Real>(scheme: Scheme) -> Constellation<T> {
    match scheme {
        Scheme::Qam4 => {
            let a = T::lit(std::f64::consts::FRAC_1_SQRT_2);
            // bit 1 <- sign of Re, bit 0 <- sign of Im (Gray by construction)
            let points = vec![
                Cplx::new(a, a),
                Cplx::new(a, -a),
                Cplx::new(-a, a),
                Cplx::new(-a, -a),
            ];
            Constellation {
                scheme,
                points,
                labels: vec![0b00, 0b01, 0b10, 0b11],
                bits_per_symbol: 2,
            }
        }
        Scheme::Bpsk => Constellation {
            scheme,
            points: vec![Cplx::new(T::one(), T::zero()), Cplx::new(-T::one(), T::zero())],
            labels: vec![0, 1],
            bits_per_symbol: 1,
        },
    }
}

impl<T: Real> Constellation<T> {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn points(&self) -> &[Cplx<T>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Cplx<T> {
        self.points[index]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    /// Half-distance scale of the decision geometry: the per-axis coordinate
    /// `A` of the points (`1/sqrt(2)` for 4-QAM, `1` for BPSK).
    pub fn coordinate(&self) -> T {
        match self.scheme {
            Scheme::Qam4 => T::lit(std::f64::consts::FRAC_1_SQRT_2),
            Scheme::Bpsk => T::one(),
        }
    }

    /// `(1/L) * sum |C_l|^2`.
    pub fn average_energy(&self) -> T {
        self.points.iter().fold(T::zero(), |acc, p| acc + p.norm_sqr()) / T::from_count(self.len())
    }

    /// Index of the point whose label is `label`.
    pub fn index_of_label(&self, label: u32) -> usize {
        self.labels
            .iter()
            .position(|&l| l == label)
            .expect("label within alphabet")
    }

    /// Maps `bits_per_symbol` bits (MSB first) to a point index.
    pub fn index_from_bits(&self, bits: &[u8]) -> usize {
        debug_assert_eq!(bits.len(), self.bits_per_symbol);
        let label = bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1));
        self.index_of_label(label)
    }

    /// Writes the label bits of point `index` (MSB first) into `out`.
    pub fn bits_of(&self, index: usize, out: &mut [u8]) {
        let label = self.labels[index];
        let k = self.bits_per_symbol;
        for (i, slot) in out.iter_mut().take(k).enumerate() {
            *slot = ((label >> (k - 1 - i)) & 1) as u8;
        }
    }

    /// Nearest point by Euclidean distance; ties go to the smallest index.
    pub fn nearest(&self, z: Cplx<T>) -> usize {
        let mut best = 0;
        let mut best_d = (z - self.points[0]).norm_sqr();
        for (i, p) in self.points.iter().enumerate().skip(1) {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// Region lookup for the soft decision with parameter `d`.
    ///
    /// Returns the index of the point whose area `A_l` contains `z`, or
    /// `None` when `z` lies in the undecided band. For 4-QAM the band is the
    /// cross of half-width `d*A` around both axes; for BPSK it is the strip
    /// `|Re z| < d`. With `d = 0` every value is decided and the result
    /// coincides with [`Constellation::nearest`].
    pub fn region(&self, z: Cplx<T>, d: T) -> Option<usize> {
        let threshold = d * self.coordinate();
        match self.scheme {
            Scheme::Qam4 => {
                if z.re.magnitude() < threshold || z.im.magnitude() < threshold {
                    return None;
                }
                let re_neg = z.re < T::zero();
                let im_neg = z.im < T::zero();
                Some((usize::from(re_neg) << 1) | usize::from(im_neg))
            }
            Scheme::Bpsk => {
                if z.re.magnitude() < threshold {
                    None
                } else {
                    Some(usize::from(z.re < T::zero()))
                }
            }
        }
    }
}
