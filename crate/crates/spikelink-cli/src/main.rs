//! Command-line front end: runs BER sweeps, preamble sweeps, raster traces
//! and power estimates, emitting CSV or JSON plus a metadata sidecar.

mod config;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use spikelink::report::{self, RasterRow, RunMetadata};
use spikelink::{
    apply_awgn, build_frame, detect_bits, encode, estimate_front_end_power, run_ber_sweep,
    run_preamble_sweep, BerRecord, FramePlan, NeuroDetectorConfig, NoiseModel, NoiseSpec,
    PowerModel,
};

use config::{resolve_experiment, resolve_power_model, FileConfig};

#[derive(Debug, Parser)]
#[command(
    name = "spikelink",
    version,
    about = "Link-level simulator of a spiking BPSK receiver with digital ADC baselines"
)]
struct Cli {
    /// Config file (TOML); defaults to $SPIKELINK_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for the Monte Carlo pool (default: all cores).
    /// Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// BER sweep over SNR for the configured detector set.
    Sweep(SweepArgs),
    /// BER sweep of the adaptive detector over preamble lengths.
    PreambleSweep(PreambleSweepArgs),
    /// Time-series dump of one frame: tx, rx and spike raster.
    Raster(RasterArgs),
    /// Power estimate of the spiking front-end against the ADC band.
    Power(PowerArgs),
}

#[derive(Debug, Args)]
struct ExperimentFlags {
    /// First SNR point in dB.
    #[arg(long)]
    snr_start: Option<f64>,
    /// Last SNR point in dB (inclusive).
    #[arg(long)]
    snr_stop: Option<f64>,
    /// SNR grid step in dB.
    #[arg(long)]
    snr_step: Option<f64>,
    /// Frames simulated per (SNR, detector) point.
    #[arg(long)]
    trials: Option<u64>,
    /// Data bits per frame (one preamble serves the whole frame).
    #[arg(long)]
    bits_per_frame: Option<usize>,
    /// Repetition factor n of the rate-1/n code.
    #[arg(long)]
    repetition: Option<u32>,
    /// Silent preamble length in symbols for the adaptive detector.
    #[arg(long)]
    preamble: Option<u32>,
    /// Master seed; reruns with the same seed are byte-identical.
    #[arg(long)]
    seed: Option<u64>,
    /// Noise convention: bandwidth-scaled | per-sample.
    #[arg(long)]
    noise_model: Option<String>,
    /// Comma list: neuro-static, neuro-adaptive, adc, adc-<rate>, ideal-ml.
    #[arg(long)]
    detectors: Option<String>,
    /// ADC rates (samples/symbol) the `adc` detector token expands to.
    #[arg(long)]
    samples_per_symbol: Option<String>,
}

#[derive(Debug, Args)]
struct OutputFlags {
    /// Output file; results are written only after the run completes.
    #[arg(long)]
    out: PathBuf,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    experiment: ExperimentFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Debug, Args)]
struct PreambleSweepArgs {
    #[command(flatten)]
    experiment: ExperimentFlags,
    #[command(flatten)]
    output: OutputFlags,
    /// Preamble lengths to sweep, in symbols.
    #[arg(long, value_delimiter = ',', default_value = "5,20,50,300")]
    preamble_lengths: Vec<u32>,
}

#[derive(Debug, Args)]
struct RasterArgs {
    /// Number of data symbols in the frame.
    #[arg(long, default_value_t = 20)]
    symbols: usize,
    /// Data pattern: random (seeded), ones, zeros or alternating.
    #[arg(long, default_value = "random")]
    pattern: String,
    /// Channel SNR in dB.
    #[arg(long, default_value_t = 4.0)]
    snr: f64,
    /// Silent preamble length in symbols.
    #[arg(long, default_value_t = 5)]
    preamble: u32,
    /// Repetition factor.
    #[arg(long, default_value_t = 1)]
    repetition: u32,
    #[arg(long)]
    seed: Option<u64>,
    /// Noise convention: bandwidth-scaled | per-sample.
    #[arg(long)]
    noise_model: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PowerArgs {
    /// Energy per spike in pJ.
    #[arg(long)]
    energy_per_spike: Option<f64>,
    /// Transmission-gate power in pW.
    #[arg(long)]
    gate_power_pw: Option<f64>,
    /// All-ones profile length in symbols (0 for a zero-traffic profile).
    #[arg(long, default_value_t = 200)]
    profile_symbols: usize,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot size the worker pool")?;
    }
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Sweep(args) => cmd_sweep(&file, args),
        Command::PreambleSweep(args) => cmd_preamble_sweep(&file, args),
        Command::Raster(args) => cmd_raster(&file, args),
        Command::Power(args) => cmd_power(&file, args),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

fn resolve_format(flag: Option<&str>, file: &FileConfig) -> Result<Format> {
    let text = flag
        .map(str::to_string)
        .or_else(|| file.output.format.clone())
        .unwrap_or_else(|| "csv".into());
    match text.as_str() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => bail!("unknown output format '{other}' (expected csv or json)"),
    }
}

fn spec_from_flags(file: &FileConfig, flags: &ExperimentFlags) -> Result<spikelink::ExperimentSpec> {
    Ok(resolve_experiment(
        file,
        flags.snr_start,
        flags.snr_stop,
        flags.snr_step,
        flags.trials,
        flags.bits_per_frame,
        flags.repetition,
        flags.preamble,
        flags.seed,
        flags.noise_model.clone(),
        flags.detectors.clone(),
        flags.samples_per_symbol.clone(),
    )?
    .spec)
}

fn write_records(
    records: &[BerRecord],
    spec: &spikelink::ExperimentSpec,
    output: &OutputFlags,
    file: &FileConfig,
) -> Result<()> {
    let format = resolve_format(output.format.as_deref(), file)?;
    let body = match format {
        Format::Csv => report::ber_records_to_csv(records)?,
        Format::Json => {
            let mut text = report::ber_records_to_json(records)?;
            text.push('\n');
            text
        }
    };
    std::fs::write(&output.out, body)
        .with_context(|| format!("cannot write {}", output.out.display()))?;
    let meta = RunMetadata::for_experiment(spec);
    let sidecar = format!("{}.meta.json", output.out.display());
    let mut meta_text = serde_json::to_string_pretty(&meta)?;
    meta_text.push('\n');
    std::fs::write(&sidecar, meta_text).with_context(|| format!("cannot write {sidecar}"))?;
    Ok(())
}

fn cmd_sweep(file: &FileConfig, args: SweepArgs) -> Result<()> {
    let spec = spec_from_flags(file, &args.experiment)?;
    let records = run_ber_sweep(&spec)?;
    write_records(&records, &spec, &args.output, file)
}

fn cmd_preamble_sweep(file: &FileConfig, args: PreambleSweepArgs) -> Result<()> {
    let mut spec = spec_from_flags(file, &args.experiment)?;
    spec.detectors = vec![spikelink::DetectorSpec::NeuroAdaptive];
    let records = run_preamble_sweep(&spec, &args.preamble_lengths)?;
    write_records(&records, &spec, &args.output, file)
}

fn cmd_raster(file: &FileConfig, args: RasterArgs) -> Result<()> {
    let exp = &file.experiment;
    let seed = args.seed.or(exp.seed).unwrap_or(42);
    let noise_model = match args.noise_model.clone().or_else(|| exp.noise_model.clone()) {
        Some(text) => text.parse::<NoiseModel>()?,
        None => NoiseModel::BandwidthScaled,
    };
    let symbol_duration_us = exp.symbol_duration_us.unwrap_or(5.0);
    let base_k = exp.base_samples_per_symbol.unwrap_or(64);

    let mut bit_rng = ChaCha12Rng::seed_from_u64(seed);
    let bits: Vec<bool> = match args.pattern.as_str() {
        "random" => (0..args.symbols).map(|_| bit_rng.random()).collect(),
        "ones" => vec![true; args.symbols],
        "zeros" => vec![false; args.symbols],
        "alternating" => (0..args.symbols).map(|i| i % 2 == 0).collect(),
        other => bail!("unknown pattern '{other}' (expected random, ones, zeros, alternating)"),
    };
    let plan = FramePlan::new(
        symbol_duration_us,
        args.repetition,
        args.preamble,
        bits,
        base_k,
    )?;
    let tx = build_frame(&plan)?;
    let rx = apply_awgn(&tx, &NoiseSpec::new(args.snr, noise_model, seed))?;
    let spikes = encode(&spikelink::LifParams::default(), &rx)?;

    let mut rows = Vec::with_capacity(2 * tx.samples.len() + spikes.len());
    for (i, &value) in tx.samples.iter().enumerate() {
        rows.push(RasterRow {
            time_us: tx.sample_time_us(i),
            series: "tx".into(),
            value,
        });
    }
    for (i, &value) in rx.samples.iter().enumerate() {
        rows.push(RasterRow {
            time_us: rx.sample_time_us(i),
            series: "rx".into(),
            value,
        });
    }
    for &t in spikes.times_us() {
        rows.push(RasterRow {
            time_us: t,
            series: "spike".into(),
            value: 1.0,
        });
    }
    let csv = report::raster_rows_to_csv(&rows)?;
    match args.out {
        Some(path) => std::fs::write(&path, csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_power(file: &FileConfig, args: PowerArgs) -> Result<()> {
    let model: PowerModel = resolve_power_model(file, args.energy_per_spike, args.gate_power_pw);
    let symbol_duration_us = file.experiment.symbol_duration_us.unwrap_or(5.0);
    let base_k = file.experiment.base_samples_per_symbol.unwrap_or(64);

    // High-SNR all-ones traffic profile through the receiver; the SDLIF sees
    // every data spike the SELIF emits.
    let (selif_spikes, sdlif_events, elapsed_us) = if args.profile_symbols == 0 {
        (0, 0, symbol_duration_us)
    } else {
        let plan = FramePlan::new(
            symbol_duration_us,
            1,
            0,
            vec![true; args.profile_symbols],
            base_k,
        )?;
        let w = build_frame(&plan)?;
        let cfg = NeuroDetectorConfig::static_threshold(1);
        let spikes = encode(&cfg.selif, &w)?;
        let (_, trace) = detect_bits(&spikes, &plan, &cfg)?;
        let sdlif: u64 = trace.bits.iter().map(|b| b.spike_count).sum();
        (spikes.len() as u64, sdlif, plan.duration_us())
    };

    let power_report = estimate_front_end_power(
        &[
            ("selif".to_string(), selif_spikes),
            ("sdlif".to_string(), sdlif_events),
        ],
        elapsed_us,
        Some(symbol_duration_us),
        &model,
    )?;
    let comparison = spikelink::compare_with_adc(&power_report, base_k, &model);

    let format = resolve_format(args.format.as_deref(), file)?;
    let body = match format {
        Format::Csv => report::power_report_to_csv(&power_report)?,
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&serde_json::json!({
                "report": power_report,
                "adc_comparison": comparison,
            }))?;
            text.push('\n');
            text
        }
    };
    match args.out {
        Some(path) => std::fs::write(&path, body)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}
