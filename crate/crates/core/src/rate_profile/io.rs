//! Profile files and NCF spectrum CSV output.
//!
//! Profiles are stored as TOML carrying the dimensions, the frozen set,
//! the generator polynomial, and provenance (construction method, swap
//! budget, metric). Import re-validates every profile invariant.

use super::ncf::NcfSpectrum;
use super::RateProfile;
use crate::error::{Error, Result};
use crate::gf2::ConvPolynomial;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

/// How a profile was constructed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileMethod {
    /// Reed-Muller score design.
    Rm,
    /// Bit-swapping NCF optimization from the RM start.
    NcfOpt,
    /// Gaussian-approximation polar construction.
    Ga,
}

impl std::fmt::Display for ProfileMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProfileMethod::Rm => "rm",
            ProfileMethod::NcfOpt => "ncf-opt",
            ProfileMethod::Ga => "ga",
        })
    }
}

/// A rate profile together with its provenance.
#[derive(Clone, PartialEq, Debug)]
pub struct ProfileRecord {
    pub profile: RateProfile,
    pub generator: ConvPolynomial,
    pub method: ProfileMethod,
    /// Swap budget of the optimization, when applicable.
    pub swap_budget: Option<usize>,
    /// NCF metric of the profile under `generator`.
    pub phi: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    n: usize,
    k: usize,
    generator: String,
    method: ProfileMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    frozen: Vec<usize>,
}

/// Writes a profile record as TOML.
pub fn export_profile(record: &ProfileRecord, path: impl AsRef<Path>) -> Result<()> {
    let file = ProfileFile {
        n: record.profile.n(),
        k: record.profile.k(),
        generator: record.generator.to_octal_string(),
        method: record.method,
        m: record.swap_budget,
        phi: record.phi,
        frozen: record.profile.frozen().to_vec(),
    };
    let text = toml::to_string(&file).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text)?;
    Ok(())
}

/// Reads a profile record back, re-validating all invariants.
pub fn import_profile(path: impl AsRef<Path>) -> Result<ProfileRecord> {
    let text = fs::read_to_string(&path)?;
    let file: ProfileFile = toml::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
    let profile = RateProfile::new(file.n, file.k, file.frozen)?;
    let generator = ConvPolynomial::parse_octal(&file.generator)?;
    Ok(ProfileRecord {
        profile,
        generator,
        method: file.method,
        swap_budget: file.m,
        phi: file.phi,
    })
}

/// Output options for [`write_spectrum_csv`].
#[derive(Clone, Debug, Default)]
pub struct SpectrumCsvOptions<R> {
    /// Sort the emitted series. Sorted output drops the per-position
    /// count/weight columns: each series (gamma, capacity) is sorted
    /// independently, so rows pair ranks rather than positions.
    pub sorted: bool,
    /// Optional per-subchannel capacities to emit alongside the
    /// spectrum.
    pub capacities: Option<Vec<R>>,
}

/// Writes an NCF spectrum as CSV.
///
/// Unsorted schema: `index,count,weight,gamma[,capacity]`, one row per
/// position (1-based). Sorted schema: `rank,gamma[,capacity]` with each
/// series in its own ascending order.
pub fn write_spectrum_csv<R: Real>(
    spectrum: &NcfSpectrum<R>,
    options: &SpectrumCsvOptions<R>,
    path: impl AsRef<Path>,
) -> Result<()> {
    if let Some(caps) = &options.capacities {
        if caps.len() != spectrum.len() {
            return Err(Error::Dimension(format!(
                "capacity column length {} does not match spectrum length {}",
                caps.len(),
                spectrum.len()
            )));
        }
    }
    let mut w = csv::Writer::from_path(path.as_ref())?;
    let gamma = spectrum.gamma_real();
    if options.sorted {
        let mut gamma = gamma;
        gamma.sort_by(|a, b| a.partial_cmp(b).expect("gammas are finite"));
        let caps = options.capacities.clone().map(|mut c| {
            c.sort_by(|a, b| a.partial_cmp(b).expect("capacities are finite"));
            c
        });
        match &caps {
            Some(_) => w.write_record(["rank", "gamma", "capacity"]),
            None => w.write_record(["rank", "gamma"]),
        }?;
        for (idx, g) in gamma.iter().enumerate() {
            match &caps {
                Some(c) => w.write_record([
                    (idx + 1).to_string(),
                    g.to_string(),
                    c[idx].to_string(),
                ]),
                None => w.write_record([(idx + 1).to_string(), g.to_string()]),
            }?;
        }
    } else {
        match &options.capacities {
            Some(_) => w.write_record(["index", "count", "weight", "gamma", "capacity"]),
            None => w.write_record(["index", "count", "weight", "gamma"]),
        }?;
        for idx in 0..spectrum.len() {
            let base = [
                (idx + 1).to_string(),
                spectrum.counts()[idx].to_string(),
                spectrum.weights()[idx].to_string(),
                gamma[idx].to_string(),
            ];
            match &options.capacities {
                Some(c) => {
                    let mut row = base.to_vec();
                    row.push(c[idx].to_string());
                    w.write_record(row)
                }
                None => w.write_record(base),
            }?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::polar_transform_matrix;
    use crate::rate_profile::{ncf_spectrum, rm_design};

    fn record() -> ProfileRecord {
        ProfileRecord {
            profile: rm_design(16, 8).unwrap(),
            generator: ConvPolynomial::parse_octal("133").unwrap(),
            method: ProfileMethod::Rm,
            swap_budget: None,
            phi: Some(10.25),
        }
    }

    #[test]
    fn export_import_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rm.profile");
        let rec = record();
        export_profile(&rec, &path).unwrap();
        let back = import_profile(&path).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn import_rejects_wrong_frozen_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.profile");
        fs::write(
            &path,
            "n = 8\nk = 4\ngenerator = \"0o7\"\nmethod = \"rm\"\nfrozen = [1, 2, 3]\n",
        )
        .unwrap();
        assert!(import_profile(&path).is_err());
    }

    #[test]
    fn import_rejects_duplicate_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.profile");
        fs::write(
            &path,
            "n = 8\nk = 4\ngenerator = \"0o7\"\nmethod = \"rm\"\nfrozen = [1, 2, 2, 3]\n",
        )
        .unwrap();
        assert!(import_profile(&path).is_err());
    }

    #[test]
    fn import_rejects_malformed_toml() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("garbage.profile");
        fs::write(&path, "not toml at all [[[").unwrap();
        assert!(matches!(import_profile(&path), Err(Error::Parse(_))));
    }

    #[test]
    fn spectrum_csv_round_trips_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        let p = rm_design(8, 4).unwrap();
        let m = polar_transform_matrix(3).unwrap();
        let s: NcfSpectrum<f64> = ncf_spectrum(&p, &m).unwrap();
        write_spectrum_csv(&s, &SpectrumCsvOptions::default(), &path).unwrap();

        let mut rdr = csv::Reader::from_path(&path).unwrap();
        let gamma = s.gamma_real();
        for (idx, row) in rdr.records().enumerate() {
            let row = row.unwrap();
            assert_eq!(row[0].parse::<usize>().unwrap(), idx + 1);
            assert_eq!(row[1].parse::<u64>().unwrap(), s.counts()[idx]);
            assert_eq!(row[2].parse::<u64>().unwrap(), s.weights()[idx]);
            assert_eq!(row[3].parse::<f64>().unwrap(), gamma[idx]);
        }
    }

    #[test]
    fn sorted_spectrum_csv_sorts_series_independently() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sorted.csv");
        let p = rm_design(8, 4).unwrap();
        let m = polar_transform_matrix(3).unwrap();
        let s: NcfSpectrum<f64> = ncf_spectrum(&p, &m).unwrap();
        let caps = crate::rate_profile::bec_capacity_profile::<f64>(8, 0.5).unwrap();
        let options = SpectrumCsvOptions {
            sorted: true,
            capacities: Some(caps.clone()),
        };
        write_spectrum_csv(&s, &options, &path).unwrap();

        let mut rdr = csv::Reader::from_path(&path).unwrap();
        let mut gammas = Vec::new();
        let mut capacities = Vec::new();
        for row in rdr.records() {
            let row = row.unwrap();
            gammas.push(row[1].parse::<f64>().unwrap());
            capacities.push(row[2].parse::<f64>().unwrap());
        }
        assert!(gammas.windows(2).all(|w| w[0] <= w[1]));
        assert!(capacities.windows(2).all(|w| w[0] <= w[1]));
        let mut expected = caps;
        expected.sort_by(f64::total_cmp);
        assert_eq!(capacities, expected);
    }
}
