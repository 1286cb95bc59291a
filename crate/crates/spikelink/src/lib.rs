//! Link-level simulator of a fully spiking BPSK receiver.
//!
//! The receive chain under study is a cascade of two leaky integrate-and-fire
//! neurons: a spike-encoding neuron (SELIF) turns the analog baseband signal
//! into a spike train whose rate tracks the instantaneous amplitude, and a
//! symbol-detection neuron (SDLIF) accumulates those spikes over each
//! repetition-coded decision window against a threshold. The threshold is
//! either static or calibrated per frame from the spikes a silent preamble
//! produces, which tracks the noise floor without any digital computation.
//!
//! The crate provides:
//!
//! - [`signal`]: frame construction (silent preamble + repetition-coded BPSK)
//!   and the sampled waveform representation;
//! - [`channel`]: seeded, counter-addressable AWGN;
//! - [`lif`]: an event-exact LIF engine (closed-form integration, analytic
//!   threshold crossings);
//! - [`neuro_rx`]: the two-neuron receiver with static and noise-adaptive
//!   thresholds;
//! - [`digital_rx`]: the quantized-ADC digital baseline and the ideal-ML
//!   oracle it is judged against;
//! - [`harness`]: reproducible Monte Carlo BER sweeps over SNR, detector,
//!   ADC rate and preamble length;
//! - [`power`]: energy-per-spike power estimates for the front-end;
//! - [`report`]: CSV/JSON emission of results.

pub mod channel;
pub mod digital_rx;
pub mod error;
pub mod harness;
pub mod lif;
pub mod neuro_rx;
pub mod power;
pub mod report;
pub mod rng;
pub mod signal;

pub use channel::{apply_awgn, NoiseModel, NoiseSpec};
pub use digital_rx::{compute_llr, digital_detect, ideal_ml_detect, sample_and_quantize, AdcConfig};
pub use error::{Error, Result};
pub use harness::{
    run_ber_sweep, run_preamble_sweep, run_trial, wilson_interval, BerRecord, DetectorSpec,
    ExperimentSpec,
};
pub use lif::{integrate_interval, run_on_waveform, LifParams, LifState, SpikeTrain};
pub use neuro_rx::{
    calibrate_threshold, detect_bits, encode, DecisionTrace, NeuroDetectorConfig, ThresholdMode,
};
pub use power::{compare_with_adc, estimate_front_end_power, AdcComparison, PowerModel, PowerReport};
pub use signal::{build_frame, symbol_windows, FramePlan, SymbolWindow, Waveform, WindowKind};
