//! Construction, analysis, and simulation of polarization-adjusted
//! convolutional (PAC) codes.
//!
//! The crate covers the full pipeline:
//!
//! * [`gf2`] — dense GF(2) linear algebra: the convolutional Toeplitz
//!   matrix, the polar Kronecker-power matrix, and their product.
//! * [`rate_profile`] — Reed-Muller scoring, the normalized compression
//!   factor (NCF) spectrum and its energy metric, bit-swapping
//!   optimization of the frozen set, BEC capacity profiles, and a
//!   Gaussian-approximation polar construction baseline.
//! * [`codec`] — PAC/polar encoding, CRC handling, and successive
//!   cancellation (SC) / CRC-aided list (SCL) decoding.
//! * [`channels`] — BEC and BPSK-AWGN channel models with deterministic
//!   per-frame random streams.
//! * [`sim`] — Monte Carlo frame-error-rate estimation with early
//!   stopping and CSV output.
//!
//! Real-valued computations are generic over the [`scalar::Real`]
//! scalar (`f32` or `f64`); the aliases below fix the default `f64`
//! instantiations used by the simulator and the CLI.

pub mod channels;
pub mod codec;
pub mod error;
pub mod gf2;
pub mod rate_profile;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default scalar for LLRs, metrics, and capacities.
pub type Llr = f64;

/// NCF spectrum over the default scalar.
pub type NcfSpectrum = rate_profile::NcfSpectrum<f64>;

/// Dense real matrix over the default scalar.
pub type RealMatrix = rate_profile::RealMatrix<f64>;

/// Optimization outcome over the default scalar.
pub type OptimizationResult = rate_profile::OptimizationResult<f64>;

/// Decoder output over the default scalar.
pub type DecoderOutput = codec::DecoderOutput<f64>;
