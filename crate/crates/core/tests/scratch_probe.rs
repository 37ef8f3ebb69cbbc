//! Temporary probe for tuning acceptance constants. Deleted before ship.

use pac_codes::rate_profile::ProfileMethod;
use pac_codes::sim::{
    run_point, ChannelSpec, CodeSpec, CrcConfig, DecoderSpec, ProfileSpec, SimConfig,
};

fn awgn_config(profile: ProfileSpec, generator: &str, ebno: f64, max_frames: u64) -> SimConfig {
    SimConfig {
        code: CodeSpec {
            n: 128,
            k: 64,
            generator: generator.into(),
            profile,
            crc: Some(CrcConfig::default()),
        },
        channel: ChannelSpec::BpskAwgn {
            ebno_db: ebno,
            rate: None,
        },
        decoder: DecoderSpec::Scl { list_size: 32 },
        seed: 1,
        min_frame_errors: 100,
        max_frames,
    }
}

#[test]
#[ignore]
fn probe_fig5_curves() {
    for (name, profile, generator) in [
        (
            "rm-pac",
            ProfileSpec::Method {
                method: ProfileMethod::Rm,
                m: None,
                snr_db: None,
            },
            "0o133",
        ),
        (
            "opt-pac",
            ProfileSpec::Method {
                method: ProfileMethod::NcfOpt,
                m: Some(4),
                snr_db: None,
            },
            "0o133",
        ),
        (
            "ga-polar",
            ProfileSpec::Method {
                method: ProfileMethod::Ga,
                m: None,
                snr_db: None,
            },
            "0o1",
        ),
    ] {
        for ebno in [1.5, 2.0, 2.5, 3.0, 3.5] {
            let r = run_point(&awgn_config(profile.clone(), generator, ebno, 100_000)).unwrap();
            println!(
                "{name} ebno={ebno}: fer={:.3e} ({}/{}) in {:.1}s",
                r.fer, r.frame_errors, r.frames, r.elapsed_seconds
            );
        }
    }
}
