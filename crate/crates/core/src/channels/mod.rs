//! Channel models mapping codewords to LLR vectors.
//!
//! LLR convention throughout: `L = ln P(y|0) - ln P(y|1)`, positive
//! favoring bit 0.

mod rng;

pub use rng::RngStream;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::scalar::Real;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Sentinel magnitude standing in for an infinite LLR on the erasure
/// channel. Kept finite so downstream arithmetic stays finite; the
/// decoders treat magnitudes at or above [`crate::codec`]'s exact cap
/// as hard values.
pub const BEC_LLR_SENTINEL: f64 = 300.0;

/// A memoryless binary-input channel.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelModel {
    /// Binary erasure channel with erasure probability `eps`.
    Bec { eps: f64 },
    /// BPSK over AWGN at `Eb/N0 = ebno_db`, with `rate` converting
    /// energy per information bit to energy per channel use.
    BpskAwgn { ebno_db: f64, rate: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Bec { eps } => {
                if !(0.0..=1.0).contains(&eps) {
                    return Err(Error::Parameter(format!(
                        "erasure probability {eps} outside [0, 1]"
                    )));
                }
            }
            ChannelModel::BpskAwgn { ebno_db, rate } => {
                if !(rate > 0.0 && rate <= 1.0) {
                    return Err(Error::Parameter(format!("rate {rate} outside (0, 1]")));
                }
                if !ebno_db.is_finite() {
                    return Err(Error::Parameter(format!("Eb/N0 {ebno_db} is not finite")));
                }
            }
        }
        Ok(())
    }

    /// The swept parameter, for reporting.
    pub fn parameter(&self) -> f64 {
        match *self {
            ChannelModel::Bec { eps } => eps,
            ChannelModel::BpskAwgn { ebno_db, .. } => ebno_db,
        }
    }

    pub fn transmit<R: Real>(
        &self,
        x: &BitVector,
        rng: &mut impl Rng,
    ) -> Result<Vec<R>> {
        match *self {
            ChannelModel::Bec { eps } => bec_transmit(x, eps, rng),
            ChannelModel::BpskAwgn { ebno_db, rate } => awgn_transmit(x, ebno_db, rate, rng),
        }
    }
}

impl std::fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ChannelModel::Bec { eps } => write!(f, "bec(eps={eps})"),
            ChannelModel::BpskAwgn { ebno_db, rate } => {
                write!(f, "bpsk-awgn(ebno={ebno_db}dB, rate={rate})")
            }
        }
    }
}

/// BEC transmission: each bit is erased (LLR 0) with probability `eps`,
/// otherwise mapped to the signed sentinel.
pub fn bec_transmit<R: Real>(x: &BitVector, eps: f64, rng: &mut impl Rng) -> Result<Vec<R>> {
    ChannelModel::Bec { eps }.validate()?;
    let sentinel = R::from_f64_lossy(BEC_LLR_SENTINEL);
    Ok(x.iter()
        .map(|bit| {
            if rng.gen::<f64>() < eps {
                R::zero()
            } else if bit == 0 {
                sentinel
            } else {
                -sentinel
            }
        })
        .collect())
}

/// Noise variance of the BPSK-AWGN channel:
/// `sigma^2 = 1 / (2 rate 10^(ebno_db/10))`.
pub fn awgn_noise_variance(ebno_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))
}

/// BPSK-AWGN transmission: maps 0 to +1 and 1 to -1, adds Gaussian
/// noise of variance `sigma^2`, and returns `LLR = 2y / sigma^2`.
pub fn awgn_transmit<R: Real>(
    x: &BitVector,
    ebno_db: f64,
    rate: f64,
    rng: &mut impl Rng,
) -> Result<Vec<R>> {
    ChannelModel::BpskAwgn { ebno_db, rate }.validate()?;
    let sigma2 = awgn_noise_variance(ebno_db, rate);
    let sigma = sigma2.sqrt();
    Ok(x.iter()
        .map(|bit| {
            let s = if bit == 0 { 1.0 } else { -1.0 };
            let noise: f64 = rng.sample(rand_distr::StandardNormal);
            R::from_f64_lossy(2.0 * (s + sigma * noise) / sigma2)
        })
        .collect())
}
