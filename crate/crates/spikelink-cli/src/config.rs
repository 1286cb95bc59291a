//! Layered configuration: built-in defaults, then an optional TOML file
//! (`--config` flag or the `SPIKELINK_CONFIG` environment variable), then
//! command-line flags. Flags win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use spikelink::{AdcConfig, DetectorSpec, ExperimentSpec, NoiseModel, PowerModel};

pub const CONFIG_ENV_VAR: &str = "SPIKELINK_CONFIG";

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub power: PowerSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub snr_start: Option<f64>,
    pub snr_stop: Option<f64>,
    pub snr_step: Option<f64>,
    pub trials: Option<u64>,
    pub bits_per_frame: Option<usize>,
    pub repetition: Option<u32>,
    pub preamble: Option<u32>,
    pub seed: Option<u64>,
    pub noise_model: Option<String>,
    pub symbol_duration_us: Option<f64>,
    pub base_samples_per_symbol: Option<u32>,
    pub detectors: Option<String>,
    pub adc_rates: Option<String>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<String>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSection {
    pub energy_per_spike_pj: Option<f64>,
    pub c_m_pf: Option<f64>,
    pub v_th_volts: Option<f64>,
    pub gate_power_pw: Option<f64>,
}

impl FileConfig {
    /// Loads the config file named by `--config` or the environment, if any.
    pub fn load(flag: Option<&Path>) -> Result<Self> {
        let path: Option<PathBuf> = match flag {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from),
        };
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
    }
}

/// Builds the SNR grid from start/stop/step.
pub fn snr_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 {
        bail!("--snr-step must be positive, got {step}");
    }
    if stop < start {
        bail!("--snr-stop {stop} is below --snr-start {start}");
    }
    let count = ((stop - start) / step).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Parses a detector list such as
/// `neuro-static,neuro-adaptive,adc,ideal-ml`; the `adc` token expands to one
/// detector per rate in `adc_rates`, and explicit `adc-<rate>` tokens are
/// also accepted.
pub fn parse_detectors(list: &str, adc_rates: &[u32]) -> Result<Vec<DetectorSpec>> {
    let mut detectors = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token {
            "neuro-static" => detectors.push(DetectorSpec::NeuroStatic),
            "neuro-adaptive" => detectors.push(DetectorSpec::NeuroAdaptive),
            "ideal-ml" => detectors.push(DetectorSpec::IdealMl),
            "adc" => {
                if adc_rates.is_empty() {
                    bail!("detector 'adc' given but no --samples-per-symbol rates");
                }
                detectors.extend(
                    adc_rates
                        .iter()
                        .map(|&rate| DetectorSpec::Adc(AdcConfig::with_rate(rate))),
                );
            }
            other => {
                if let Some(rate) = other.strip_prefix("adc-") {
                    let rate: u32 = rate
                        .parse()
                        .with_context(|| format!("bad ADC rate in detector '{other}'"))?;
                    detectors.push(DetectorSpec::Adc(AdcConfig::with_rate(rate)));
                } else {
                    bail!(
                        "unknown detector '{other}' (expected neuro-static, neuro-adaptive, \
                         adc, adc-<rate> or ideal-ml)"
                    );
                }
            }
        }
    }
    if detectors.is_empty() {
        bail!("empty detector list");
    }
    Ok(detectors)
}

pub fn parse_rates(list: &str) -> Result<Vec<u32>> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .with_context(|| format!("bad samples-per-symbol value '{t}'"))
        })
        .collect()
}

/// Merged experiment settings with flag > file > default precedence.
pub struct SweepSettings {
    pub spec: ExperimentSpec,
}

#[allow(clippy::too_many_arguments)]
pub fn resolve_experiment(
    file: &FileConfig,
    snr_start: Option<f64>,
    snr_stop: Option<f64>,
    snr_step: Option<f64>,
    trials: Option<u64>,
    bits_per_frame: Option<usize>,
    repetition: Option<u32>,
    preamble: Option<u32>,
    seed: Option<u64>,
    noise_model: Option<String>,
    detectors: Option<String>,
    samples_per_symbol: Option<String>,
) -> Result<SweepSettings> {
    let defaults = ExperimentSpec::default();
    let exp = &file.experiment;

    let start = snr_start.or(exp.snr_start).unwrap_or(-2.0);
    let stop = snr_stop.or(exp.snr_stop).unwrap_or(10.0);
    let step = snr_step.or(exp.snr_step).unwrap_or(1.0);

    let rates_text = samples_per_symbol
        .or_else(|| exp.adc_rates.clone())
        .unwrap_or_else(|| "8,32,64".into());
    let rates = parse_rates(&rates_text)?;
    let detector_text = detectors
        .or_else(|| exp.detectors.clone())
        .unwrap_or_else(|| "neuro-static,neuro-adaptive,adc,ideal-ml".into());

    let noise_model = match noise_model.or_else(|| exp.noise_model.clone()) {
        Some(text) => text.parse::<NoiseModel>()?,
        None => defaults.noise_model,
    };

    let spec = ExperimentSpec {
        snr_points_db: snr_grid(start, stop, step)?,
        trials_per_point: trials.or(exp.trials).unwrap_or(defaults.trials_per_point),
        bits_per_frame: bits_per_frame
            .or(exp.bits_per_frame)
            .unwrap_or(defaults.bits_per_frame),
        detectors: parse_detectors(&detector_text, &rates)?,
        master_seed: seed.or(exp.seed).unwrap_or(defaults.master_seed),
        noise_model,
        symbol_duration_us: exp
            .symbol_duration_us
            .unwrap_or(defaults.symbol_duration_us),
        base_samples_per_symbol: exp
            .base_samples_per_symbol
            .unwrap_or(defaults.base_samples_per_symbol),
        repetition: repetition.or(exp.repetition).unwrap_or(defaults.repetition),
        preamble_symbols: preamble.or(exp.preamble).unwrap_or(defaults.preamble_symbols),
        ..defaults
    };
    Ok(SweepSettings { spec })
}

pub fn resolve_power_model(
    file: &FileConfig,
    energy_per_spike: Option<f64>,
    gate_power_pw: Option<f64>,
) -> PowerModel {
    let defaults = PowerModel::default();
    PowerModel {
        energy_per_spike_pj: energy_per_spike
            .or(file.power.energy_per_spike_pj)
            .unwrap_or(defaults.energy_per_spike_pj),
        c_m_pf: file.power.c_m_pf,
        v_th_volts: file.power.v_th_volts,
        gate_power_pw: gate_power_pw
            .or(file.power.gate_power_pw)
            .unwrap_or(defaults.gate_power_pw),
        ..defaults
    }
}
