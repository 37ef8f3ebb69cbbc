//! Channel-based construction helpers: BEC polarization capacities and
//! the Gaussian-approximation (GA) polar construction baseline.

use super::RateProfile;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Per-subchannel BEC capacities after `log2(n)` polarization steps,
/// in natural index order.
///
/// Starting from `I = 1 - eps`, each step maps a capacity `I` to the
/// pair `(I^2, 2I - I^2)`; position `2j` of the doubled vector takes
/// the minus transform of position `j` and position `2j + 1` the plus
/// transform.
pub fn bec_capacity_profile<R: Real>(n: usize, eps: R) -> Result<Vec<R>> {
    if !n.is_power_of_two() {
        return Err(Error::Parameter(format!("block length {n} is not a power of two")));
    }
    if eps < R::zero() || eps > R::one() {
        return Err(Error::Parameter(format!("erasure probability {eps} outside [0, 1]")));
    }
    let two = R::from_f64_lossy(2.0);
    let mut caps = vec![R::one() - eps];
    while caps.len() < n {
        let mut next = Vec::with_capacity(2 * caps.len());
        for &c in &caps {
            next.push(c * c);
            next.push(two * c - c * c);
        }
        caps = next;
    }
    Ok(caps)
}

// Two-segment approximation of the density-evolution function
// phi(x) = 1 - E[tanh(L/2)] for L ~ N(x, 2x).
const PHI_SWITCH: f64 = 10.0;

fn de_phi(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x < PHI_SWITCH {
        (0.0218 - 0.4527 * x.powf(0.86)).exp()
    } else {
        (std::f64::consts::PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

fn de_phi_inv(y: f64) -> f64 {
    // The low-mean segment of de_phi slightly exceeds 1 as x -> 0, so
    // accept y up to e^0.0218 and map anything at or above it to 0.
    if y >= (0.0218f64).exp() {
        0.0
    } else if y >= de_phi(PHI_SWITCH) {
        ((0.0218 - y.ln()) / 0.4527).powf(1.0 / 0.86)
    } else {
        // Bisection on the decreasing tail segment.
        let mut lo = PHI_SWITCH;
        let mut hi = PHI_SWITCH;
        while de_phi(hi) > y {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if de_phi(mid) > y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

fn de_minus(mean: f64) -> f64 {
    let y = de_phi(mean);
    let z = 1.0 - (1.0 - y) * (1.0 - y);
    if z <= 1e-280 {
        // phi underflow: phi(m-) ~ 2 phi(m) deep in the tail, so the
        // mean drops by about 4 ln 2.
        (mean - 4.0 * std::f64::consts::LN_2).max(0.0)
    } else {
        de_phi_inv(z)
    }
}

/// Mean LLRs of the polarized subchannels of a BPSK-AWGN channel under
/// Gaussian-approximation density evolution, natural index order.
pub fn ga_llr_means(n: usize, design_snr_db: f64, rate: f64) -> Result<Vec<f64>> {
    if !n.is_power_of_two() {
        return Err(Error::Parameter(format!("block length {n} is not a power of two")));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Parameter(format!("rate {rate} outside (0, 1]")));
    }
    // sigma^2 = 1 / (2 R 10^(snr/10)); channel LLR mean is 2 / sigma^2.
    let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(design_snr_db / 10.0));
    let mut means = vec![2.0 / sigma2];
    while means.len() < n {
        let mut next = Vec::with_capacity(2 * means.len());
        for &m in &means {
            next.push(de_minus(m));
            next.push(2.0 * m);
        }
        means = next;
    }
    Ok(means)
}

/// Gaussian-approximation polar construction: freezes the `n - k`
/// subchannels with the smallest density-evolution LLR means at the
/// design SNR (`Eb/N0` in dB, rate `k / n`). Deterministic for fixed
/// inputs; the frozen set depends on the design SNR.
pub fn ga_construction(n: usize, k: usize, design_snr_db: f64) -> Result<RateProfile> {
    if k < 1 || k > n {
        return Err(Error::Parameter(format!("k = {k} outside 1..={n}")));
    }
    let means = ga_llr_means(n, design_snr_db, k as f64 / n as f64)?;
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| {
        means[a - 1]
            .partial_cmp(&means[b - 1])
            .expect("density-evolution means are finite")
            .then(a.cmp(&b))
    });
    RateProfile::new(n, k, order.into_iter().take(n - k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bec_capacity_small_cases() {
        let c = bec_capacity_profile::<f64>(2, 0.5).unwrap();
        assert_eq!(c, vec![0.25, 0.75]);
        let c = bec_capacity_profile::<f64>(4, 0.5).unwrap();
        assert_eq!(c, vec![0.0625, 0.4375, 0.5625, 0.9375]);
    }

    #[test]
    fn bec_capacity_conserved() {
        for n in [2usize, 16, 256, 1024] {
            for eps in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
                let caps = bec_capacity_profile::<f64>(n, eps).unwrap();
                let total: f64 = caps.iter().sum();
                assert_relative_eq!(
                    total,
                    n as f64 * (1.0 - eps),
                    epsilon = 1e-9,
                    max_relative = 1e-9
                );
                assert!(caps.iter().all(|&c| (0.0..=1.0).contains(&c)));
            }
        }
    }

    #[test]
    fn bec_capacity_rejects_bad_input() {
        assert!(bec_capacity_profile::<f64>(3, 0.5).is_err());
        assert!(bec_capacity_profile::<f64>(4, 1.5).is_err());
        assert!(bec_capacity_profile::<f64>(4, -0.1).is_err());
    }

    #[test]
    fn phi_inverse_round_trips() {
        for x in [0.01, 0.1, 1.0, 5.0, 9.9, 10.1, 20.0, 100.0] {
            let y = de_phi(x);
            assert_relative_eq!(de_phi_inv(y), x, max_relative = 1e-6);
        }
    }

    #[test]
    fn ga_two_one_prefers_upper_channel() {
        for snr in [0.0, 2.5, 6.0, 10.0] {
            let p = ga_construction(2, 1, snr).unwrap();
            assert_eq!(p.non_frozen(), vec![2]);
        }
    }

    #[test]
    fn ga_four_two_extremes_fixed() {
        for snr in [-2.0, 0.0, 2.5, 8.0] {
            let p = ga_construction(4, 2, snr).unwrap();
            assert!(!p.is_frozen(4), "index 4 must carry information at {snr} dB");
            assert!(p.is_frozen(1), "index 1 must be frozen at {snr} dB");
        }
    }

    #[test]
    fn ga_means_are_ordered_at_extremes() {
        let means = ga_llr_means(128, 2.5, 0.5).unwrap();
        let min = means.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(means[0], min, "all-minus index is the least reliable");
        assert_eq!(means[127], max, "all-plus index is the most reliable");
    }

    #[test]
    fn ga_128_64_is_valid_profile() {
        let p = ga_construction(128, 64, 2.5).unwrap();
        assert_eq!(p.k(), 64);
        assert_eq!(p.frozen().len(), 64);
    }

    /// Monte Carlo density-evolution oracle: empirical subchannel error
    /// rates must order the same way as the GA means on well-separated
    /// index pairs.
    #[test]
    fn ga_ordering_matches_monte_carlo_density_evolution() {
        use rand::{Rng, SeedableRng};

        const SAMPLES: usize = 200_000;
        let n_stages = 7;
        let sigma2 = 1.0 / (2.0 * 0.5 * 10f64.powf(2.5 / 10.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);

        // Evolves a sample population along one index's transform path
        // (bits MSB-first, 0 = minus, 1 = plus).
        let mut error_rate = |index: usize| -> f64 {
            let mut samples: Vec<f64> = (0..SAMPLES)
                .map(|_| {
                    let g: f64 = rng.sample(rand_distr::StandardNormal);
                    2.0 / sigma2 + g * (4.0 / sigma2).sqrt()
                })
                .collect();
            for stage in (0..n_stages).rev() {
                let bit = (index - 1) >> stage & 1;
                // Independent partner draws via a shuffled copy.
                let mut partner = samples.clone();
                for i in (1..partner.len()).rev() {
                    partner.swap(i, rng.gen_range(0..=i));
                }
                for (a, b) in samples.iter_mut().zip(partner) {
                    if bit == 0 {
                        if a.abs() > 37.0 || b.abs() > 37.0 {
                            let m = a.abs().min(b.abs());
                            *a = if (*a < 0.0) ^ (b < 0.0) { -m } else { m };
                        } else {
                            *a = 2.0 * ((*a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
                        }
                    } else {
                        *a += b;
                    }
                }
            }
            samples.iter().filter(|&&x| x < 0.0).count() as f64 / SAMPLES as f64
        };

        let means = ga_llr_means(128, 2.5, 0.5).unwrap();
        // Clearly separated pairs near the extremes of the ordering.
        for (lo, hi) in [(1usize, 128usize), (2, 128), (1, 64), (48, 128)] {
            let (pe_lo, pe_hi) = (error_rate(lo), error_rate(hi));
            assert!(
                pe_lo > pe_hi,
                "oracle: P_e({lo}) = {pe_lo} should exceed P_e({hi}) = {pe_hi}"
            );
            assert!(
                means[lo - 1] < means[hi - 1],
                "GA: mean({lo}) should be below mean({hi})"
            );
        }
    }
}
