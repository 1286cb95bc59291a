//! Seeded Monte Carlo BER experiments over SNR, detector type, ADC rate and
//! preamble length.
//!
//! Every trial derives its randomness from
//! `(master_seed, snr_index, detector_id, trial_index)` through a stateless
//! mixing chain, so trials can run in any order on any number of workers and
//! the aggregated results are identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{apply_awgn, NoiseModel, NoiseSpec};
use crate::digital_rx::{digital_detect, ideal_ml_detect, sample_and_quantize, AdcConfig};
use crate::error::{Error, Result};
use crate::lif::LifParams;
use crate::neuro_rx::{detect_bits, encode, NeuroDetectorConfig};
use crate::rng::{hash_label, mix};
use crate::signal::{build_frame, FramePlan};

/// One detector participating in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DetectorSpec {
    /// Spiking detector with the fixed `7 n dv_m` threshold.
    NeuroStatic,
    /// Spiking detector calibrated on a silent preamble each frame.
    NeuroAdaptive,
    /// Quantized digital baseline at the configured sampling rate.
    Adc(AdcConfig),
    /// Unquantized maximum-likelihood oracle over all base samples.
    IdealMl,
}

impl DetectorSpec {
    /// Stable identifier used in output records and seed derivation.
    pub fn id(&self) -> String {
        match self {
            DetectorSpec::NeuroStatic => "neuro-static".into(),
            DetectorSpec::NeuroAdaptive => "neuro-adaptive".into(),
            DetectorSpec::Adc(cfg) => format!("adc-{}", cfg.samples_per_symbol),
            DetectorSpec::IdealMl => "ideal-ml".into(),
        }
    }

    /// ADC sampling rate, when applicable.
    pub fn samples_per_symbol(&self) -> Option<u32> {
        match self {
            DetectorSpec::Adc(cfg) => Some(cfg.samples_per_symbol),
            _ => None,
        }
    }
}

/// Full description of a BER experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub snr_points_db: Vec<f64>,
    pub trials_per_point: u64,
    /// Data bits carried by each frame; one silent preamble serves them all.
    pub bits_per_frame: usize,
    pub detectors: Vec<DetectorSpec>,
    pub master_seed: u64,
    pub noise_model: NoiseModel,
    pub symbol_duration_us: f64,
    pub base_samples_per_symbol: u32,
    pub repetition: u32,
    /// Preamble length for the adaptive detector's frames.
    pub preamble_symbols: u32,
    pub selif: LifParams,
    pub dv_m: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            snr_points_db: (-2..=10).map(f64::from).collect(),
            trials_per_point: 100_000,
            bits_per_frame: 100,
            detectors: vec![
                DetectorSpec::NeuroStatic,
                DetectorSpec::NeuroAdaptive,
                DetectorSpec::Adc(AdcConfig::with_rate(8)),
                DetectorSpec::Adc(AdcConfig::with_rate(32)),
                DetectorSpec::Adc(AdcConfig::with_rate(64)),
                DetectorSpec::IdealMl,
            ],
            master_seed: 42,
            noise_model: NoiseModel::BandwidthScaled,
            symbol_duration_us: 5.0,
            base_samples_per_symbol: 64,
            repetition: 3,
            preamble_symbols: 300,
            selif: LifParams::default(),
            dv_m: 1.0,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.snr_points_db.is_empty() {
            return Err(Error::InvalidParameter("no SNR points".into()));
        }
        if self.trials_per_point == 0 {
            return Err(Error::InvalidParameter(
                "trials_per_point must be >= 1".into(),
            ));
        }
        if self.bits_per_frame == 0 {
            return Err(Error::InvalidParameter(
                "bits_per_frame must be >= 1".into(),
            ));
        }
        if self.detectors.is_empty() {
            return Err(Error::InvalidParameter("no detectors configured".into()));
        }
        if self.repetition == 0 {
            return Err(Error::InvalidParameter("repetition must be >= 1".into()));
        }
        for detector in &self.detectors {
            match detector {
                DetectorSpec::Adc(cfg) => {
                    cfg.validate()?;
                    if !self.base_samples_per_symbol.is_multiple_of(cfg.samples_per_symbol) {
                        return Err(Error::IncompatibleRate {
                            samples_per_symbol: cfg.samples_per_symbol,
                            base_samples_per_symbol: self.base_samples_per_symbol,
                        });
                    }
                }
                DetectorSpec::NeuroAdaptive if self.preamble_symbols == 0 => {
                    return Err(Error::NoCalibrationInterval);
                }
                _ => {}
            }
        }
        self.selif.validate()?;
        self.neuro_config(&DetectorSpec::NeuroStatic).validate()
    }

    /// Preamble length a detector's frames carry: only the adaptive detector
    /// pays the calibration overhead.
    fn preamble_for(&self, detector: &DetectorSpec) -> u32 {
        match detector {
            DetectorSpec::NeuroAdaptive => self.preamble_symbols,
            _ => 0,
        }
    }

    fn neuro_config(&self, detector: &DetectorSpec) -> NeuroDetectorConfig {
        let base = match detector {
            DetectorSpec::NeuroAdaptive => {
                NeuroDetectorConfig::adaptive(self.repetition, self.preamble_symbols)
            }
            _ => NeuroDetectorConfig::static_threshold(self.repetition),
        };
        NeuroDetectorConfig {
            selif: self.selif,
            dv_m: self.dv_m,
            ..base
        }
    }
}

/// One row of a BER sweep result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub snr_db: f64,
    pub detector: String,
    pub repetition: u32,
    pub samples_per_symbol: Option<u32>,
    pub preamble_symbols: u32,
    pub trials: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, total: u64, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = successes as f64 / n;
    let z_sq = z * z;
    let denom = 1.0 + z_sq / n;
    let center = (p + z_sq / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z_sq / (4.0 * n * n)).sqrt() / denom;
    // Clamp against rounding so the interval always brackets the estimate.
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

fn trial_seed(spec: &ExperimentSpec, detector: &DetectorSpec, snr_index: usize, trial: u64) -> u64 {
    let mut seed = mix(spec.master_seed, snr_index as u64);
    seed = mix(seed, hash_label(&detector.id()));
    mix(seed, trial)
}

/// Runs one transmission: fresh random bits and preamble, AWGN at the SNR
/// point, detection, and returns the number of bit errors.
pub fn run_trial(
    spec: &ExperimentSpec,
    detector: &DetectorSpec,
    snr_index: usize,
    trial_index: u64,
) -> Result<u64> {
    let snr_db = *spec
        .snr_points_db
        .get(snr_index)
        .ok_or_else(|| Error::InvalidParameter(format!("snr index {snr_index} out of range")))?;
    let seed = trial_seed(spec, detector, snr_index, trial_index);

    let mut bit_rng = ChaCha12Rng::seed_from_u64(mix(seed, hash_label("bits")));
    let bits: Vec<bool> = (0..spec.bits_per_frame).map(|_| bit_rng.random()).collect();

    let plan = FramePlan::new(
        spec.symbol_duration_us,
        spec.repetition,
        spec.preamble_for(detector),
        bits.clone(),
        spec.base_samples_per_symbol,
    )?;
    let tx = build_frame(&plan)?;
    let noise = NoiseSpec::new(snr_db, spec.noise_model, mix(seed, hash_label("noise")));
    let rx = apply_awgn(&tx, &noise)?;

    let decoded = match detector {
        DetectorSpec::NeuroStatic | DetectorSpec::NeuroAdaptive => {
            let cfg = spec.neuro_config(detector);
            let spikes = encode(&cfg.selif, &rx)?;
            detect_bits(&spikes, &plan, &cfg)?.0
        }
        DetectorSpec::Adc(cfg) => {
            let levels = sample_and_quantize(&rx, cfg)?;
            let skip = plan.preamble_symbols as usize * cfg.samples_per_symbol as usize;
            digital_detect(&levels[skip..], spec.repetition, cfg.samples_per_symbol)
        }
        DetectorSpec::IdealMl => ideal_ml_detect(&rx, &plan)?,
    };

    debug_assert_eq!(decoded.len(), bits.len());
    Ok(bits
        .iter()
        .zip(&decoded)
        .filter(|(tx_bit, rx_bit)| tx_bit != rx_bit)
        .count() as u64)
}

fn record_for(
    spec: &ExperimentSpec,
    detector: &DetectorSpec,
    snr_db: f64,
    bit_errors: u64,
) -> BerRecord {
    let total_bits = spec.trials_per_point * spec.bits_per_frame as u64;
    let ber = bit_errors as f64 / total_bits as f64;
    let (ci95_low, ci95_high) = wilson_interval(bit_errors, total_bits, 1.96);
    BerRecord {
        snr_db,
        detector: detector.id(),
        repetition: spec.repetition,
        samples_per_symbol: detector.samples_per_symbol(),
        preamble_symbols: spec.preamble_for(detector),
        trials: spec.trials_per_point,
        bit_errors,
        ber,
        ci95_low,
        ci95_high,
    }
}

/// Runs the full sweep: one record per `(snr, detector)` pair.
///
/// Trials are embarrassingly parallel; the error count is an exact integer
/// sum, so results do not depend on worker count or execution order.
pub fn run_ber_sweep(spec: &ExperimentSpec) -> Result<Vec<BerRecord>> {
    spec.validate()?;
    let mut records = Vec::with_capacity(spec.snr_points_db.len() * spec.detectors.len());
    for (snr_index, &snr_db) in spec.snr_points_db.iter().enumerate() {
        for detector in &spec.detectors {
            let bit_errors = (0..spec.trials_per_point)
                .into_par_iter()
                .map(|trial| run_trial(spec, detector, snr_index, trial))
                .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
            records.push(record_for(spec, detector, snr_db, bit_errors));
        }
    }
    Ok(records)
}

/// Sweeps the adaptive detector over preamble lengths; one record per
/// `(snr, length)` pair.
pub fn run_preamble_sweep(spec: &ExperimentSpec, preamble_lengths: &[u32]) -> Result<Vec<BerRecord>> {
    if !spec
        .detectors
        .iter()
        .any(|d| matches!(d, DetectorSpec::NeuroAdaptive))
    {
        return Err(Error::InvalidParameter(
            "preamble sweep requires the adaptive detector".into(),
        ));
    }
    if preamble_lengths.is_empty() {
        return Err(Error::InvalidParameter("no preamble lengths given".into()));
    }
    if preamble_lengths.contains(&0) {
        return Err(Error::NoCalibrationInterval);
    }
    let mut records = Vec::new();
    for &length in preamble_lengths {
        let sub_spec = ExperimentSpec {
            preamble_symbols: length,
            detectors: vec![DetectorSpec::NeuroAdaptive],
            ..spec.clone()
        };
        records.extend(run_ber_sweep(&sub_spec)?);
    }
    Ok(records)
}
