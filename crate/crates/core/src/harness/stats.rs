//! Reference curves and Monte Carlo statistics.

use statrs::function::erf::erfc;

/// Gaussian tail `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Gray-mapped 4-QAM bit error rate over AWGN at `Es/N0` (dB):
/// `Q(sqrt(Es/N0)) = Q(sqrt(2 Eb/N0))`.
pub fn qpsk_awgn_ber(es_n0_db: f64) -> f64 {
    q_function(10f64.powf(es_n0_db / 10.0).sqrt())
}

/// BPSK bit error rate over AWGN at `Es/N0 = Eb/N0` (dB).
pub fn bpsk_awgn_ber(es_n0_db: f64) -> f64 {
    q_function((2.0 * 10f64.powf(es_n0_db / 10.0)).sqrt())
}

/// Standard deviation of a BER estimate from `bits` Bernoulli trials.
pub fn binomial_sigma(p: f64, bits: u64) -> f64 {
    (p * (1.0 - p) / bits as f64).sqrt()
}

/// SNR at which a BER curve crosses `target`, by linear interpolation of
/// `log10(ber)` between the bracketing points. `curve` holds
/// `(snr_db, ber)` pairs sorted by SNR; the first downward crossing wins.
pub fn snr_at_ber(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let lt = target.log10();
    curve.windows(2).find_map(|w| {
        let (s0, b0) = w[0];
        let (s1, b1) = w[1];
        if b0 >= target && b1 <= target && b0 > 0.0 && b1 > 0.0 {
            let (l0, l1) = (b0.log10(), b1.log10());
            if (l0 - l1).abs() < f64::EPSILON {
                Some(s0)
            } else {
                Some(s0 + (s1 - s0) * (l0 - lt) / (l0 - l1))
            }
        } else {
            None
        }
    })
}
