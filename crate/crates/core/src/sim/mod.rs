//! Monte Carlo frame-error-rate estimation.
//!
//! Each frame draws a uniform payload and its channel noise from a
//! dedicated [`RngStream`] keyed by `(seed, frame index)`, so results
//! are identical for any thread count. Frames run in parallel batches;
//! the stopping rule (first of `min_frame_errors` errors or
//! `max_frames` frames) is evaluated in frame-index order, which keeps
//! early stopping deterministic too.

mod config;

pub use config::{
    load_sweep_config, ChannelSpec, CodeSpec, CrcConfig, DecoderSpec, OneOrMany, ProfileSpec,
    SimConfig, SweepChannelSpec, SweepCodeSpec, SweepConfig,
};

use crate::channels::{ChannelModel, RngStream};
use crate::codec::{PacCode, ScDecoder, SclDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, ConvPolynomial};
use crate::rate_profile::{
    bit_swap_optimize, compression_matrix, ga_construction, import_profile, phi_metric, rm_design,
    ProfileMethod, RateProfile,
};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

/// Outcome of one experiment point.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SimResult {
    /// Echo of the full configuration.
    pub config: SimConfig,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    /// Frames where a CRC-passing path carried the wrong payload.
    /// These still count as frame errors.
    pub undetected_errors: u64,
    pub elapsed_seconds: f64,
    /// NCF metric of the profile under the configured generator.
    pub phi: f64,
    pub profile_method: String,
    pub crc_convention: Option<String>,
    pub rate_convention: String,
}

/// A code plus channel/decoder choices, ready to simulate.
pub struct ResolvedPoint {
    pub code: PacCode,
    pub channel: ChannelModel,
    pub decoder: DecoderSpec,
    pub phi: f64,
    pub profile_method: String,
}

/// Builds the rate profile named by the config (constructing or
/// loading it) and assembles the code and channel objects.
pub fn resolve_point(config: &SimConfig) -> Result<ResolvedPoint> {
    config.validate()?;
    let spec = &config.code;
    let generator = ConvPolynomial::parse_octal(&spec.generator)?;
    let crc = spec.crc.as_ref().map(|c| c.to_spec()).transpose()?;
    let profile_k = match &spec.crc {
        Some(c) if c.expand_k => spec.k + c.width,
        _ => spec.k,
    };
    // GA profiles are SNR-specific; unless pinned with snr_db they
    // follow the channel's operating point (2.5 dB off-AWGN).
    let default_ga_snr = match config.channel {
        ChannelSpec::BpskAwgn { ebno_db, .. } => ebno_db,
        _ => 2.5,
    };
    let profile = build_profile(&spec.profile, spec.n, profile_k, &generator, default_ga_snr)?;
    if profile.n() != spec.n || profile.k() != profile_k {
        return Err(Error::Config(format!(
            "profile is ({}, {}), expected ({}, {profile_k})",
            profile.n(),
            profile.k(),
            spec.n
        )));
    }
    let gt = compression_matrix::<f64>(&crate::gf2::gf2_matmul(
        &crate::gf2::toeplitz_conv_matrix(&generator, spec.n)?,
        &crate::gf2::polar_transform_matrix(spec.n.trailing_zeros())?,
    )?)?;
    let phi = phi_metric(&profile, &gt)?;
    let channel = config.channel.resolve(profile.k(), profile.n());
    channel.validate()?;
    let profile_method = spec.profile.describe();
    let code = PacCode::new(profile, generator, crc)?;
    Ok(ResolvedPoint {
        code,
        channel,
        decoder: config.decoder,
        phi,
        profile_method,
    })
}

fn build_profile(
    spec: &ProfileSpec,
    n: usize,
    k: usize,
    generator: &ConvPolynomial,
    default_ga_snr: f64,
) -> Result<RateProfile> {
    match spec {
        ProfileSpec::File { file } => Ok(import_profile(file)?.profile),
        ProfileSpec::Method { method, m, snr_db } => match method {
            ProfileMethod::Rm => rm_design(n, k),
            ProfileMethod::Ga => ga_construction(n, k, snr_db.unwrap_or(default_ga_snr)),
            ProfileMethod::NcfOpt => {
                let budget = m.ok_or_else(|| {
                    Error::Config("ncf-opt profile needs a swap budget m".into())
                })?;
                let gt = compression_matrix::<f64>(&crate::gf2::gf2_matmul(
                    &crate::gf2::toeplitz_conv_matrix(generator, n)?,
                    &crate::gf2::polar_transform_matrix(n.trailing_zeros())?,
                )?)?;
                Ok(bit_swap_optimize(&rm_design(n, k)?, budget, &gt)?.best_profile)
            }
        },
    }
}

enum FrameDecoder<'c> {
    Sc(ScDecoder<'c, f64>),
    Scl(SclDecoder<'c, f64>),
}

impl<'c> FrameDecoder<'c> {
    fn new(code: &'c PacCode, spec: DecoderSpec) -> Result<Self> {
        Ok(match spec {
            DecoderSpec::Sc => FrameDecoder::Sc(ScDecoder::new(code)),
            DecoderSpec::Scl { list_size } => {
                FrameDecoder::Scl(SclDecoder::new(code, list_size)?)
            }
        })
    }
}

struct FrameOutcome {
    error: bool,
    undetected: bool,
}

fn run_frame(
    point: &ResolvedPoint,
    decoder: &mut FrameDecoder<'_>,
    seed: u64,
    frame: u64,
) -> Result<FrameOutcome> {
    let mut rng = RngStream::new(seed, frame).rng();
    let payload_len = point.code.payload_len();
    let mut payload = BitVector::zeros(payload_len);
    for i in 0..payload_len {
        payload.set(i, rng.gen::<bool>() as u8);
    }
    let x = point.code.encode(&payload)?;
    let llr: Vec<f64> = point.channel.transmit(&x, &mut rng)?;
    let out = match decoder {
        FrameDecoder::Sc(dec) => dec.decode(&llr)?,
        FrameDecoder::Scl(dec) => dec.decode(&llr)?,
    };
    let error = out.info_bits != payload;
    Ok(FrameOutcome {
        error,
        undetected: error && out.success && point.code.crc().is_some(),
    })
}

/// Runs one experiment point to its stopping rule.
pub fn run_point(config: &SimConfig) -> Result<SimResult> {
    let start = Instant::now();
    let point = resolve_point(config)?;

    let mut frames = 0u64;
    let mut frame_errors = 0u64;
    let mut undetected_errors = 0u64;
    const BATCH: u64 = 1024;

    'outer: while frames < config.max_frames && frame_errors < config.min_frame_errors {
        let end = (frames + BATCH).min(config.max_frames);
        let outcomes: Result<Vec<FrameOutcome>> = (frames..end)
            .into_par_iter()
            .map_init(
                || FrameDecoder::new(&point.code, point.decoder),
                |dec, f| match dec {
                    Ok(dec) => run_frame(&point, dec, config.seed, f),
                    Err(e) => Err(Error::Config(e.to_string())),
                },
            )
            .collect();
        // Scan in frame-index order; the batch size never changes where
        // the stopping rule fires.
        for outcome in outcomes? {
            frames += 1;
            if outcome.error {
                frame_errors += 1;
                if outcome.undetected {
                    undetected_errors += 1;
                }
                if frame_errors >= config.min_frame_errors {
                    break 'outer;
                }
            }
        }
    }

    Ok(SimResult {
        config: config.clone(),
        frames,
        frame_errors,
        fer: frame_errors as f64 / frames as f64,
        undetected_errors,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        phi: point.phi,
        profile_method: point.profile_method.clone(),
        crc_convention: point.code.crc().map(|c| c.convention()),
        rate_convention: match point.channel {
            ChannelModel::BpskAwgn { rate, .. } => format!("ebno rate={rate}"),
            ChannelModel::Bec { .. } => "bec".into(),
        },
    })
}

/// Runs every point in order, tagging failures with the point index.
pub fn run_sweep(configs: &[SimConfig]) -> Result<Vec<SimResult>> {
    if configs.is_empty() {
        return Err(Error::Config("sweep is empty".into()));
    }
    configs
        .iter()
        .enumerate()
        .map(|(i, config)| {
            run_point(config).map_err(|e| {
                Error::Config(format!(
                    "point {i} ({}, {}): {e}",
                    config.code.profile.describe(),
                    config.channel.parameter()
                ))
            })
        })
        .collect()
}

/// One row of the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsCsvRow {
    pub channel_param: f64,
    pub decoder: String,
    pub list_size: usize,
    pub profile_method: String,
    pub phi: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub seed: u64,
}

impl ResultsCsvRow {
    fn from_result(r: &SimResult) -> Self {
        Self {
            channel_param: r.config.channel.parameter(),
            decoder: r.config.decoder.name().to_string(),
            list_size: r.config.decoder.list_size(),
            profile_method: r.profile_method.clone(),
            phi: r.phi,
            frames: r.frames,
            frame_errors: r.frame_errors,
            fer: r.fer,
            seed: r.config.seed,
        }
    }
}

/// Writes one row per result. Reals are serialized in shortest
/// round-trip form, so parsing the file recovers them exactly.
pub fn write_results_csv(results: &[SimResult], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref())?;
    for r in results {
        w.serialize(ResultsCsvRow::from_result(r))
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    // serde-driven writers only emit headers alongside rows; force the
    // header row out for empty result sets.
    if results.is_empty() {
        w.write_record([
            "channel_param",
            "decoder",
            "list_size",
            "profile_method",
            "phi",
            "frames",
            "frame_errors",
            "fer",
            "seed",
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a results CSV back.
pub fn read_results_csv(path: impl AsRef<Path>) -> Result<Vec<ResultsCsvRow>> {
    let mut rdr = csv::Reader::from_path(path.as_ref())?;
    rdr.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bec_config(eps: f64, seed: u64) -> SimConfig {
        SimConfig {
            code: CodeSpec {
                n: 64,
                k: 32,
                generator: "0o133".into(),
                profile: ProfileSpec::Method {
                    method: ProfileMethod::Rm,
                    m: None,
                    snr_db: None,
                },
                crc: None,
            },
            channel: ChannelSpec::Bec { eps },
            decoder: DecoderSpec::Sc,
            seed,
            min_frame_errors: 20,
            max_frames: 500,
        }
    }

    #[test]
    fn noiseless_point_has_zero_fer() {
        let r = run_point(&bec_config(0.0, 1)).unwrap();
        assert_eq!(r.frame_errors, 0);
        assert_eq!(r.frames, 500);
        assert_eq!(r.fer, 0.0);
    }

    #[test]
    fn fully_erased_channel_fails_almost_every_frame() {
        let mut config = bec_config(1.0, 2);
        config.min_frame_errors = 100;
        config.max_frames = 120;
        let r = run_point(&config).unwrap();
        assert!(r.fer > 0.95, "fer = {}", r.fer);
    }

    #[test]
    fn early_stopping_at_min_errors() {
        let mut config = bec_config(0.6, 3);
        config.min_frame_errors = 10;
        config.max_frames = 100_000;
        let r = run_point(&config).unwrap();
        assert_eq!(r.frame_errors, 10);
        assert!(r.frames < 100_000);
        assert_eq!(r.fer, 10.0 / r.frames as f64);
    }

    #[test]
    fn identical_configs_reproduce_exactly() {
        let a = run_point(&bec_config(0.4, 7)).unwrap();
        let b = run_point(&bec_config(0.4, 7)).unwrap();
        assert_eq!(a.frames, b.frames);
        assert_eq!(a.frame_errors, b.frame_errors);
        let c = run_point(&bec_config(0.4, 8)).unwrap();
        assert!(c.frames != a.frames || c.frame_errors == a.frame_errors);
    }

    #[test]
    fn sweep_preserves_order_and_matches_run_point() {
        let configs = vec![bec_config(0.4, 5), bec_config(0.3, 5)];
        let results = run_sweep(&configs).unwrap();
        assert_eq!(results.len(), 2);
        assert_eq!(results[0].config.channel.parameter(), 0.4);
        let single = run_point(&configs[0]).unwrap();
        assert_eq!(results[0].frames, single.frames);
        assert_eq!(results[0].frame_errors, single.frame_errors);
        assert!(run_sweep(&[]).is_err());
    }

    #[test]
    fn results_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let results = vec![
            run_point(&bec_config(0.4, 5)).unwrap(),
            run_point(&bec_config(0.3, 5)).unwrap(),
        ];
        write_results_csv(&results, &path).unwrap();
        let rows = read_results_csv(&path).unwrap();
        assert_eq!(rows.len(), 2);
        for (row, r) in rows.iter().zip(&results) {
            assert_eq!(row.fer, r.fer);
            assert_eq!(row.phi, r.phi);
            assert_eq!(row.frames, r.frames);
            assert_eq!(row.channel_param, r.config.channel.parameter());
        }
    }

    #[test]
    fn empty_results_emit_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        write_results_csv(&[], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.trim(),
            "channel_param,decoder,list_size,profile_method,phi,frames,frame_errors,fer,seed"
        );
        assert!(read_results_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn payload_bits_are_uniform() {
        // Chi-square over positions at ~1e6 frames' worth of payload
        // draws (smaller frame count, wider payload).
        let mut rng_totals = vec![0u64; 32];
        let frames = 40_000u64;
        for f in 0..frames {
            let mut rng = RngStream::new(99, f).rng();
            for slot in rng_totals.iter_mut() {
                *slot += rng.gen::<bool>() as u64;
            }
        }
        let expected = frames as f64 / 2.0;
        let chi2: f64 = rng_totals
            .iter()
            .map(|&ones| {
                let zeros = frames - ones;
                (ones as f64 - expected).powi(2) / expected
                    + (zeros as f64 - expected).powi(2) / expected
            })
            .sum();
        // 64 cells in total; chi2 dof = 32; p = 1e-6 cutoff ~ 90.
        assert!(chi2 < 90.0, "chi2 = {chi2}");
    }

    #[test]
    fn crc_accounting_variants() {
        let mut config = bec_config(0.0, 1);
        config.code.crc = Some(CrcConfig::default());
        config.max_frames = 10;
        config.code.n = 128;
        config.code.k = 64;
        let point = resolve_point(&config).unwrap();
        assert_eq!(point.code.payload_len(), 56);
        assert_eq!(point.code.k(), 64);

        config.code.crc = Some(CrcConfig {
            expand_k: true,
            ..CrcConfig::default()
        });
        let point = resolve_point(&config).unwrap();
        assert_eq!(point.code.payload_len(), 64);
        assert_eq!(point.code.k(), 72);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut config = bec_config(0.2, 1);
        config.code.profile = ProfileSpec::Method {
            method: ProfileMethod::NcfOpt,
            m: None,
            snr_db: None,
        };
        assert!(run_point(&config).is_err());

        let mut config = bec_config(0.2, 1);
        config.code.generator = "0o9".into();
        assert!(run_point(&config).is_err());

        let mut config = bec_config(1.5, 1);
        config.max_frames = 10;
        assert!(run_point(&config).is_err());
    }
}
