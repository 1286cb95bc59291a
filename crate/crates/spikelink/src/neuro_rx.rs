//! Two-neuron receiver: a spike-encoding LIF (SELIF) converts the baseband
//! waveform into a spike train, and a symbol-detection LIF (SDLIF) counts
//! spikes per decision window against a static or noise-calibrated threshold.
//!
//! The SDLIF has no leakage path: it is a pure counter whose membrane rises
//! by `dv_m` per data spike and resets at every window boundary, so the
//! end-of-window comparison is equivalent to "fires within the window".
//! During the silent preamble the spike train is routed to the threshold side
//! instead, each noise spike raising the threshold by
//! `dv_n = repetition * dv_m / preamble_symbols`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lif::{run_on_waveform, LifParams, LifState, SpikeTrain};
use crate::signal::{symbol_windows, FramePlan, Waveform, WindowKind};

/// Threshold strategy for the detection neuron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdMode {
    /// Fixed threshold, typically `7 * repetition * dv_m` (half the nominal
    /// high-SNR spike count over one decision window).
    Static { theta: f64 },
    /// Threshold accumulated from preamble noise spikes:
    /// `theta = max(dv_floor, n_noise * dv_n)`. The floor keeps a silent
    /// preamble from producing an always-firing detector.
    Adaptive { dv_floor: f64 },
}

/// Configuration of the full spiking detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuroDetectorConfig {
    /// Encoding-neuron parameters.
    pub selif: LifParams,
    /// SDLIF membrane increment per data spike.
    pub dv_m: f64,
    pub threshold_mode: ThresholdMode,
    /// Repetition factor of the code, n.
    pub repetition: u32,
    /// Preamble length used for adaptive calibration.
    pub preamble_symbols: u32,
}

impl NeuroDetectorConfig {
    /// Static-threshold detector with the `7 n dv_m` rule.
    pub fn static_threshold(repetition: u32) -> Self {
        let dv_m = 1.0;
        Self {
            selif: LifParams::default(),
            dv_m,
            threshold_mode: ThresholdMode::Static {
                theta: 7.0 * f64::from(repetition) * dv_m,
            },
            repetition,
            preamble_symbols: 0,
        }
    }

    /// Adaptive-threshold detector calibrated on `preamble_symbols` silent
    /// symbols, with the default floor of `0.5 * dv_m`.
    pub fn adaptive(repetition: u32, preamble_symbols: u32) -> Self {
        let dv_m = 1.0;
        Self {
            selif: LifParams::default(),
            dv_m,
            threshold_mode: ThresholdMode::Adaptive { dv_floor: 0.5 * dv_m },
            repetition,
            preamble_symbols,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.selif.validate()?;
        if !self.dv_m.is_finite() || self.dv_m <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dv_m must be positive, got {}",
                self.dv_m
            )));
        }
        if self.repetition == 0 {
            return Err(Error::InvalidParameter("repetition must be >= 1".into()));
        }
        if let ThresholdMode::Adaptive { .. } = self.threshold_mode {
            if self.preamble_symbols == 0 {
                return Err(Error::NoCalibrationInterval);
            }
        }
        Ok(())
    }

    /// Threshold increment per preamble spike, `n * dv_m / n_symbols`.
    pub fn dv_n(&self) -> Result<f64> {
        if self.preamble_symbols == 0 {
            return Err(Error::NoCalibrationInterval);
        }
        Ok(f64::from(self.repetition) * self.dv_m / f64::from(self.preamble_symbols))
    }
}

/// Decision record for one data bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitDecision {
    pub spike_count: u64,
    /// `spike_count * dv_m`: the SDLIF membrane at the end of the window.
    pub accumulated_potential: f64,
    pub threshold_used: f64,
    /// `+1` maps to `true`, `-1` to `false`.
    pub decision: bool,
}

/// Full trace of one frame's detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTrace {
    /// Spikes observed during the silent preamble.
    pub noise_spike_count: u64,
    /// Calibrated threshold, present in adaptive mode.
    pub theta_adaptive: Option<f64>,
    pub bits: Vec<BitDecision>,
}

/// Runs the encoding neuron over the received waveform from rest.
pub fn encode(selif: &LifParams, rx: &Waveform) -> Result<SpikeTrain> {
    run_on_waveform(selif, rx, LifState::at_rest(selif))
}

/// Calibrates the adaptive threshold from preamble spikes:
/// `theta = max(dv_floor, n_noise * dv_n)`. The threshold is then held for
/// the rest of the frame (no leakage on the threshold path).
pub fn calibrate_threshold(
    spikes: &SpikeTrain,
    plan: &FramePlan,
    cfg: &NeuroDetectorConfig,
) -> Result<f64> {
    let ThresholdMode::Adaptive { dv_floor } = cfg.threshold_mode else {
        return Err(Error::InvalidParameter(
            "calibrate_threshold requires adaptive mode".into(),
        ));
    };
    if cfg.preamble_symbols == 0 || plan.preamble_symbols == 0 {
        return Err(Error::NoCalibrationInterval);
    }
    let preamble_end = f64::from(plan.preamble_symbols) * plan.symbol_duration_us;
    let n_noise = spikes.count_in(0.0, preamble_end);
    Ok((n_noise as f64 * cfg.dv_n()?).max(dv_floor))
}

/// Decides every data bit of the frame from the encoded spike train.
///
/// Each decision window spans `repetition * T_sym`; the spike count inside it
/// decides `+1` iff `count * dv_m >= theta`. Windows are half-open, so a
/// spike exactly on a boundary belongs to the later window.
pub fn detect_bits(
    spikes: &SpikeTrain,
    plan: &FramePlan,
    cfg: &NeuroDetectorConfig,
) -> Result<(Vec<bool>, DecisionTrace)> {
    cfg.validate()?;
    let preamble_end = f64::from(plan.preamble_symbols) * plan.symbol_duration_us;
    let noise_spike_count = spikes.count_in(0.0, preamble_end);
    let (theta, theta_adaptive) = match cfg.threshold_mode {
        ThresholdMode::Static { theta } => (theta, None),
        ThresholdMode::Adaptive { .. } => {
            let theta = calibrate_threshold(spikes, plan, cfg)?;
            (theta, Some(theta))
        }
    };

    let windows = symbol_windows(plan)?;
    let mut bits = Vec::with_capacity(plan.data_bits.len());
    let mut decisions = Vec::with_capacity(plan.data_bits.len());
    for window in windows {
        if let WindowKind::Data { .. } = window.kind {
            let spike_count = spikes.count_in(window.start_us, window.end_us);
            let accumulated_potential = spike_count as f64 * cfg.dv_m;
            let decision = accumulated_potential >= theta;
            bits.push(decision);
            decisions.push(BitDecision {
                spike_count,
                accumulated_potential,
                threshold_used: theta,
                decision,
            });
        }
    }
    Ok((
        bits,
        DecisionTrace {
            noise_spike_count,
            theta_adaptive,
            bits: decisions,
        },
    ))
}
