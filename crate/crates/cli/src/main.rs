//! Command-line front end: construct rate profiles, compute NCF
//! spectra, optimize profiles by bit swapping, and run FER simulations.
//!
//! Every subcommand is deterministic given its flags. Output files are
//! removed again if the command fails partway, so exit code 0 means
//! every requested output was written.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pac_codes::gf2::{gf2_matmul, polar_transform_matrix, toeplitz_conv_matrix, ConvPolynomial};
use pac_codes::rate_profile::{
    bec_capacity_profile, bit_swap_optimize, compression_matrix, export_profile, ga_construction,
    import_profile, ncf_spectrum, phi_metric, rm_design, write_spectrum_csv, ProfileMethod,
    ProfileRecord, RateProfile, SpectrumCsvOptions,
};
use pac_codes::sim::{
    load_sweep_config, run_sweep, write_results_csv, CrcConfig, DecoderSpec, OneOrMany,
    ProfileSpec, SimResult, SweepChannelSpec, SweepCodeSpec, SweepConfig,
};
use pac_codes::RealMatrix;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pac",
    version,
    about = "PAC code construction, NCF analysis, rate-profile optimization, and FER simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a rate profile and write it to a profile file.
    Construct(ConstructArgs),
    /// Compute the NCF spectrum of a stored profile and write it as CSV.
    Ncf(NcfArgs),
    /// Optimize a profile by bit swapping from the RM start.
    Optimize(OptimizeArgs),
    /// Run Monte Carlo FER simulation points and write results as CSV.
    Simulate(SimulateArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ConstructMethod {
    Rm,
    Ga,
}

#[derive(Args)]
struct ConstructArgs {
    /// Block length N (power of two).
    #[arg(long)]
    n: usize,
    /// Number of non-frozen positions K.
    #[arg(long)]
    k: usize,
    /// Construction method.
    #[arg(long, value_enum)]
    method: ConstructMethod,
    /// Octal generator polynomial (e.g. 0o133); sets the NCF metric
    /// recorded with the profile.
    #[arg(long)]
    g: String,
    /// Design SNR in dB for the GA construction.
    #[arg(long, default_value_t = 2.5)]
    snr: f64,
    /// Output profile path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum SpectrumLevel {
    /// Through the convolutional matrix only (the polar-transform
    /// input).
    U,
    /// Through the full generator matrix (the channel input).
    X,
}

#[derive(Args)]
struct NcfArgs {
    /// Profile file to analyze.
    #[arg(long)]
    profile: PathBuf,
    /// Spectrum level.
    #[arg(long, value_enum, default_value_t = SpectrumLevel::X)]
    level: SpectrumLevel,
    /// Sort each emitted series independently (capacity-profile style
    /// output).
    #[arg(long)]
    sorted: bool,
    /// Also emit the BEC capacity profile at this erasure probability.
    #[arg(long)]
    bec_eps: Option<f64>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Block length N (power of two).
    #[arg(long)]
    n: usize,
    /// Number of non-frozen positions K.
    #[arg(long)]
    k: usize,
    /// Octal generator polynomial.
    #[arg(long)]
    g: String,
    /// Swap budget M.
    #[arg(long)]
    m: usize,
    /// Output profile path.
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV path for the full swap trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ChannelKind {
    Bec,
    Awgn,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum DecoderKind {
    Sc,
    Scl,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ProfileMethodArg {
    Rm,
    Ga,
    NcfOpt,
}

#[derive(Args)]
struct SimulateArgs {
    /// Sweep configuration file (TOML). Mutually exclusive with the
    /// inline code/channel/decoder flags.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Block length N.
    #[arg(long)]
    n: Option<usize>,
    /// Number of non-frozen positions K.
    #[arg(long)]
    k: Option<usize>,
    /// Octal generator polynomial.
    #[arg(long)]
    g: Option<String>,
    /// Profile construction method (default rm).
    #[arg(long, value_enum)]
    profile_method: Option<ProfileMethodArg>,
    /// Load the profile from a file instead of constructing it.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    /// Swap budget for --profile-method ncf-opt.
    #[arg(long)]
    m: Option<usize>,
    /// Attach the default CRC-8 (Koopman 0xA6).
    #[arg(long)]
    crc: bool,
    /// Channel family.
    #[arg(long, value_enum)]
    channel: Option<ChannelKind>,
    /// BEC erasure probability; repeat for a sweep.
    #[arg(long)]
    eps: Vec<f64>,
    /// AWGN Eb/N0 in dB; repeat for a sweep.
    #[arg(long)]
    ebno: Vec<f64>,
    /// Rate override for the Eb/N0 accounting (default K/N).
    #[arg(long)]
    rate: Option<f64>,
    /// Decoder.
    #[arg(long, value_enum)]
    decoder: Option<DecoderKind>,
    /// SCL list size (default 32).
    #[arg(long)]
    list_size: Option<usize>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Stop a point after this many frame errors.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Stop a point after this many frames.
    #[arg(long)]
    max_frames: Option<u64>,

    /// Output CSV path.
    #[arg(long)]
    csv: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut outputs = OutputGuard::default();
    match run(cli, &mut outputs) {
        Ok(()) => {
            outputs.commit();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Tracks files created by the running command and removes them if the
/// command fails, so failures never leave partial outputs behind.
#[derive(Default)]
struct OutputGuard {
    paths: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    fn track(&mut self, path: &Path) {
        self.paths.push(path.to_path_buf());
    }

    fn commit(&mut self) {
        self.committed = true;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.paths {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}

fn run(cli: Cli, outputs: &mut OutputGuard) -> Result<()> {
    match cli.command {
        Command::Construct(args) => cmd_construct(args, outputs),
        Command::Ncf(args) => cmd_ncf(args, outputs),
        Command::Optimize(args) => cmd_optimize(args, outputs),
        Command::Simulate(args) => cmd_simulate(args, outputs),
    }
}

fn compression_for(generator: &ConvPolynomial, n: usize) -> Result<RealMatrix> {
    let gc = toeplitz_conv_matrix(generator, n)?;
    let gp = polar_transform_matrix(n.trailing_zeros())?;
    Ok(compression_matrix(&gf2_matmul(&gc, &gp)?)?)
}

fn cmd_construct(args: ConstructArgs, outputs: &mut OutputGuard) -> Result<()> {
    let generator = ConvPolynomial::parse_octal(&args.g)?;
    let (profile, method): (RateProfile, ProfileMethod) = match args.method {
        ConstructMethod::Rm => (rm_design(args.n, args.k)?, ProfileMethod::Rm),
        ConstructMethod::Ga => (
            ga_construction(args.n, args.k, args.snr)?,
            ProfileMethod::Ga,
        ),
    };
    let gt = compression_for(&generator, args.n)?;
    let phi = phi_metric(&profile, &gt)?;
    let record = ProfileRecord {
        profile,
        generator,
        method,
        swap_budget: None,
        phi: Some(phi),
    };
    outputs.track(&args.out);
    export_profile(&record, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "wrote {} ({}, {}) method={} phi={phi:.4}",
        args.out.display(),
        args.n,
        args.k,
        record.method
    );
    Ok(())
}

fn cmd_ncf(args: NcfArgs, outputs: &mut OutputGuard) -> Result<()> {
    let record = import_profile(&args.profile)
        .with_context(|| format!("loading profile {}", args.profile.display()))?;
    let n = record.profile.n();
    let matrix = match args.level {
        SpectrumLevel::U => toeplitz_conv_matrix(&record.generator, n)?,
        SpectrumLevel::X => gf2_matmul(
            &toeplitz_conv_matrix(&record.generator, n)?,
            &polar_transform_matrix(n.trailing_zeros())?,
        )?,
    };
    let spectrum = ncf_spectrum(&record.profile, &matrix)?;
    let capacities = args
        .bec_eps
        .map(|eps| bec_capacity_profile::<f64>(n, eps))
        .transpose()?;
    let options = SpectrumCsvOptions {
        sorted: args.sorted,
        capacities,
    };
    outputs.track(&args.out);
    write_spectrum_csv(&spectrum, &options, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "wrote {} ({} rows, level {:?}, energy {:.4})",
        args.out.display(),
        n,
        args.level,
        spectrum.energy()
    );
    Ok(())
}

fn cmd_optimize(args: OptimizeArgs, outputs: &mut OutputGuard) -> Result<()> {
    let generator = ConvPolynomial::parse_octal(&args.g)?;
    let start = rm_design(args.n, args.k)?;
    let gt = compression_for(&generator, args.n)?;
    let start_phi = phi_metric(&start, &gt)?;
    let result = bit_swap_optimize(&start, args.m, &gt)?;

    if let Some(trace_path) = &args.trace {
        outputs.track(trace_path);
        let mut w = csv::Writer::from_path(trace_path)
            .with_context(|| format!("writing {}", trace_path.display()))?;
        w.write_record(["unfrozen", "frozen", "phi"])?;
        for rec in &result.trace {
            w.write_record([
                join_indices(&rec.unfrozen),
                join_indices(&rec.frozen),
                rec.phi.to_string(),
            ])?;
        }
        w.flush()?;
    }

    let record = ProfileRecord {
        profile: result.best_profile.clone(),
        generator,
        method: ProfileMethod::NcfOpt,
        swap_budget: Some(args.m),
        phi: Some(result.best_metric),
    };
    outputs.track(&args.out);
    export_profile(&record, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "wrote {}: phi {start_phi:.4} -> {:.4} over {} evaluations (m={})",
        args.out.display(),
        result.best_metric,
        result.evaluations,
        args.m
    );
    Ok(())
}

fn join_indices(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_simulate(args: SimulateArgs, outputs: &mut OutputGuard) -> Result<()> {
    let sweep = simulate_sweep_config(&args)?;
    let points = sweep.expand()?;
    let results = run_sweep(&points)?;
    outputs.track(&args.csv);
    write_results_csv(&results, &args.csv)
        .with_context(|| format!("writing {}", args.csv.display()))?;
    print_summary(&results);
    println!("wrote {} ({} points)", args.csv.display(), results.len());
    Ok(())
}

fn simulate_sweep_config(args: &SimulateArgs) -> Result<SweepConfig> {
    let inline_used = args.n.is_some()
        || args.k.is_some()
        || args.g.is_some()
        || args.profile_method.is_some()
        || args.profile_file.is_some()
        || args.m.is_some()
        || args.crc
        || args.channel.is_some()
        || !args.eps.is_empty()
        || !args.ebno.is_empty()
        || args.rate.is_some()
        || args.decoder.is_some()
        || args.list_size.is_some();

    if let Some(config) = &args.config {
        if inline_used {
            bail!("--config and inline code/channel/decoder flags are mutually exclusive; choose one source");
        }
        let mut sweep = load_sweep_config(config)
            .with_context(|| format!("loading config {}", config.display()))?;
        // Run-control flags may still override the file.
        if let Some(seed) = args.seed {
            sweep.seed = seed;
        }
        if let Some(min_errors) = args.min_errors {
            sweep.min_frame_errors = min_errors;
        }
        if let Some(max_frames) = args.max_frames {
            sweep.max_frames = max_frames;
        }
        return Ok(sweep);
    }

    let n = args.n.context("--n is required without --config")?;
    let k = args.k.context("--k is required without --config")?;
    let generator = args.g.clone().context("--g is required without --config")?;
    let profile = match (&args.profile_file, args.profile_method) {
        (Some(_), Some(_)) => bail!("--profile-file and --profile-method are mutually exclusive"),
        (Some(file), None) => ProfileSpec::File { file: file.clone() },
        (None, method) => {
            let method = match method.unwrap_or(ProfileMethodArg::Rm) {
                ProfileMethodArg::Rm => ProfileMethod::Rm,
                ProfileMethodArg::Ga => ProfileMethod::Ga,
                ProfileMethodArg::NcfOpt => ProfileMethod::NcfOpt,
            };
            ProfileSpec::Method {
                method,
                m: args.m,
                snr_db: None,
            }
        }
    };
    let channel = match args.channel.context("--channel is required without --config")? {
        ChannelKind::Bec => {
            if args.eps.is_empty() {
                bail!("--channel bec needs at least one --eps");
            }
            if !args.ebno.is_empty() {
                bail!("--ebno applies to --channel awgn only");
            }
            SweepChannelSpec::Bec {
                eps: OneOrMany::Many(args.eps.clone()),
            }
        }
        ChannelKind::Awgn => {
            if args.ebno.is_empty() {
                bail!("--channel awgn needs at least one --ebno");
            }
            if !args.eps.is_empty() {
                bail!("--eps applies to --channel bec only");
            }
            SweepChannelSpec::BpskAwgn {
                ebno_db: OneOrMany::Many(args.ebno.clone()),
                rate: args.rate,
            }
        }
    };
    let decoder = match args.decoder.context("--decoder is required without --config")? {
        DecoderKind::Sc => DecoderSpec::Sc,
        DecoderKind::Scl => DecoderSpec::Scl {
            list_size: args.list_size.unwrap_or(32),
        },
    };
    Ok(SweepConfig {
        code: SweepCodeSpec {
            n,
            k,
            generator,
            profiles: vec![profile],
            crc: args.crc.then(CrcConfig::default),
        },
        channel,
        decoder,
        seed: args.seed.unwrap_or(0),
        min_frame_errors: args.min_errors.unwrap_or(100),
        max_frames: args.max_frames.unwrap_or(10_000_000),
    })
}

fn print_summary(results: &[SimResult]) {
    println!(
        "{:>12} {:>16} {:>6} {:>5} {:>10} {:>10} {:>12} {:>9}",
        "channel", "profile", "dec", "L", "frames", "errors", "fer", "phi"
    );
    for r in results {
        println!(
            "{:>12} {:>16} {:>6} {:>5} {:>10} {:>10} {:>12.4e} {:>9.4}",
            r.config.channel.parameter(),
            r.profile_method,
            r.config.decoder.name(),
            r.config.decoder.list_size(),
            r.frames,
            r.frame_errors,
            r.fer,
            r.phi
        );
    }
}
