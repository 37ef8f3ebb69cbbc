//! Simulation configuration: single points and sweep files.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::rate_profile::ProfileMethod;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// One Monte Carlo experiment point.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    pub code: CodeSpec,
    pub channel: ChannelSpec,
    pub decoder: DecoderSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
}

fn default_min_frame_errors() -> u64 {
    100
}

fn default_max_frames() -> u64 {
    10_000_000
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_frame_errors < 1 {
            return Err(Error::Config("min_frame_errors must be at least 1".into()));
        }
        if self.max_frames < 1 {
            return Err(Error::Config("max_frames must be at least 1".into()));
        }
        if self.code.k < 1 || self.code.k > self.code.n {
            return Err(Error::Config(format!(
                "k = {} outside 1..={}",
                self.code.k, self.code.n
            )));
        }
        Ok(())
    }
}

/// Code construction parameters.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    /// Octal generator polynomial, e.g. `"0o133"`.
    pub generator: String,
    pub profile: ProfileSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc: Option<CrcConfig>,
}

/// CRC attachment. By default the `width` CRC bits live inside the `k`
/// non-frozen positions (payload `k - width`); with `expand_k` the
/// profile is built with `k + width` non-frozen positions instead, so
/// all `k` payload bits survive.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CrcConfig {
    #[serde(default = "default_crc_width")]
    pub width: usize,
    /// Generator in implicit-+1 (Koopman) hex notation.
    #[serde(default = "default_crc_poly")]
    pub koopman: String,
    #[serde(default)]
    pub expand_k: bool,
}

impl Default for CrcConfig {
    fn default() -> Self {
        Self {
            width: default_crc_width(),
            koopman: default_crc_poly(),
            expand_k: false,
        }
    }
}

fn default_crc_width() -> usize {
    8
}

fn default_crc_poly() -> String {
    "0xA6".into()
}

impl CrcConfig {
    pub fn to_spec(&self) -> Result<crate::codec::CrcSpec> {
        let digits = self
            .koopman
            .strip_prefix("0x")
            .or_else(|| self.koopman.strip_prefix("0X"))
            .unwrap_or(&self.koopman);
        let value = u64::from_str_radix(digits, 16)
            .map_err(|e| Error::Config(format!("CRC polynomial {:?}: {e}", self.koopman)))?;
        crate::codec::CrcSpec::from_koopman(
            self.width,
            value,
            format!("crc{}-koopman-{}", self.width, self.koopman.to_lowercase()),
        )
    }
}

/// Where the rate profile comes from.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    /// Load from a profile file.
    File { file: PathBuf },
    /// Construct by method: `rm`, `ncf-opt` (requires `m`), or `ga`
    /// (optional `snr_db`, default 2.5).
    Method {
        method: ProfileMethod,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        snr_db: Option<f64>,
    },
}

impl ProfileSpec {
    pub fn describe(&self) -> String {
        match self {
            ProfileSpec::File { file } => format!("file:{}", file.display()),
            ProfileSpec::Method { method, m, .. } => match m {
                Some(m) => format!("{method}(m={m})"),
                None => method.to_string(),
            },
        }
    }
}

/// Channel point with an optional explicit rate override for the AWGN
/// Eb/N0 accounting (default: non-frozen count over block length).
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelSpec {
    Bec {
        eps: f64,
    },
    BpskAwgn {
        ebno_db: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate: Option<f64>,
    },
}

impl ChannelSpec {
    /// Resolves to a concrete channel model given the code's non-frozen
    /// count and block length.
    pub fn resolve(&self, k: usize, n: usize) -> ChannelModel {
        match *self {
            ChannelSpec::Bec { eps } => ChannelModel::Bec { eps },
            ChannelSpec::BpskAwgn { ebno_db, rate } => ChannelModel::BpskAwgn {
                ebno_db,
                rate: rate.unwrap_or(k as f64 / n as f64),
            },
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            ChannelSpec::Bec { eps } => eps,
            ChannelSpec::BpskAwgn { ebno_db, .. } => ebno_db,
        }
    }
}

/// Decoder selection.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecoderSpec {
    Sc,
    Scl { list_size: usize },
}

impl DecoderSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderSpec::Sc => "sc",
            DecoderSpec::Scl { .. } => "scl",
        }
    }

    pub fn list_size(&self) -> usize {
        match self {
            DecoderSpec::Sc => 1,
            DecoderSpec::Scl { list_size } => *list_size,
        }
    }
}

/// A sweep: one code family, several profiles, several channel points.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub code: SweepCodeSpec,
    pub channel: SweepChannelSpec,
    pub decoder: DecoderSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SweepCodeSpec {
    pub n: usize,
    pub k: usize,
    pub generator: String,
    pub profiles: Vec<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc: Option<CrcConfig>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SweepChannelSpec {
    Bec {
        eps: OneOrMany<f64>,
    },
    BpskAwgn {
        ebno_db: OneOrMany<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate: Option<f64>,
    },
}

/// A scalar or a list, for sweep axes.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(vs) => vs.clone(),
        }
    }
}

impl SweepConfig {
    /// Expands into the product of profiles and channel points,
    /// profiles outermost, preserving declaration order.
    pub fn expand(&self) -> Result<Vec<SimConfig>> {
        if self.code.profiles.is_empty() {
            return Err(Error::Config("sweep needs at least one profile".into()));
        }
        let channels: Vec<ChannelSpec> = match &self.channel {
            SweepChannelSpec::Bec { eps } => eps
                .values()
                .into_iter()
                .map(|eps| ChannelSpec::Bec { eps })
                .collect(),
            SweepChannelSpec::BpskAwgn { ebno_db, rate } => ebno_db
                .values()
                .into_iter()
                .map(|ebno_db| ChannelSpec::BpskAwgn {
                    ebno_db,
                    rate: *rate,
                })
                .collect(),
        };
        if channels.is_empty() {
            return Err(Error::Config("sweep needs at least one channel point".into()));
        }
        let mut out = Vec::with_capacity(self.code.profiles.len() * channels.len());
        for profile in &self.code.profiles {
            for channel in &channels {
                out.push(SimConfig {
                    code: CodeSpec {
                        n: self.code.n,
                        k: self.code.k,
                        generator: self.code.generator.clone(),
                        profile: profile.clone(),
                        crc: self.code.crc.clone(),
                    },
                    channel: *channel,
                    decoder: self.decoder,
                    seed: self.seed,
                    min_frame_errors: self.min_frame_errors,
                    max_frames: self.max_frames,
                });
            }
        }
        Ok(out)
    }
}

/// Reads a sweep configuration from TOML.
pub fn load_sweep_config(path: impl AsRef<Path>) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Config(format!("cannot read config {}: {e}", path.as_ref().display()))
    })?;
    toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))
}
