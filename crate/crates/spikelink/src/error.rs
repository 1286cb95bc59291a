//! Error type shared across the simulator.

use thiserror::Error;

/// Errors produced by frame construction, neuron integration and detector
/// configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Frame with no data bits and no preamble symbols.
    #[error("empty frame")]
    EmptyFrame,

    /// Non-finite input current fed to a neuron.
    #[error("invalid stimulus: input current is not finite")]
    InvalidStimulus,

    /// Adaptive threshold requested without a preamble to calibrate on.
    #[error("no calibration interval: adaptive threshold requires preamble_symbols > 0")]
    NoCalibrationInterval,

    /// ADC sampling rate does not divide the waveform base rate.
    #[error("incompatible rate: {samples_per_symbol} samples/symbol does not divide {base_samples_per_symbol} base samples/symbol")]
    IncompatibleRate {
        samples_per_symbol: u32,
        base_samples_per_symbol: u32,
    },

    /// Invalid parameter value outside the supported range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
