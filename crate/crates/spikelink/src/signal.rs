//! Transmit-frame construction: silent preamble followed by repetition-coded
//! BPSK data, rendered as a uniformly sampled baseband waveform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbol schedule for one transmission frame.
///
/// A frame is `preamble_symbols` silent symbols followed by each data bit
/// repeated over `repetition` consecutive symbols. Bit `b` maps to amplitude
/// `2b - 1`, i.e. `1 -> +1.0`, `0 -> -1.0`; preamble symbols carry amplitude 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramePlan {
    /// Symbol duration T_sym in microseconds.
    pub symbol_duration_us: f64,
    /// Repetition factor n (rate 1/n code).
    pub repetition: u32,
    /// Number of leading silent symbols.
    pub preamble_symbols: u32,
    /// Data bits, one decision per entry.
    pub data_bits: Vec<bool>,
    /// Base samples per symbol K_sym shared by every receiver front-end.
    pub base_samples_per_symbol: u32,
}

impl FramePlan {
    pub fn new(
        symbol_duration_us: f64,
        repetition: u32,
        preamble_symbols: u32,
        data_bits: Vec<bool>,
        base_samples_per_symbol: u32,
    ) -> Result<Self> {
        let plan = Self {
            symbol_duration_us,
            repetition,
            preamble_symbols,
            data_bits,
            base_samples_per_symbol,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.symbol_duration_us.is_finite() || self.symbol_duration_us <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "symbol_duration_us must be positive, got {}",
                self.symbol_duration_us
            )));
        }
        if self.repetition == 0 {
            return Err(Error::InvalidParameter("repetition must be >= 1".into()));
        }
        if self.base_samples_per_symbol == 0 {
            return Err(Error::InvalidParameter(
                "base_samples_per_symbol must be >= 1".into(),
            ));
        }
        if self.data_bits.is_empty() && self.preamble_symbols == 0 {
            return Err(Error::EmptyFrame);
        }
        Ok(())
    }

    /// Total symbol count: preamble plus `repetition` slots per data bit.
    pub fn total_symbols(&self) -> u64 {
        u64::from(self.preamble_symbols)
            + u64::from(self.repetition) * self.data_bits.len() as u64
    }

    /// Frame duration in microseconds.
    pub fn duration_us(&self) -> f64 {
        self.total_symbols() as f64 * self.symbol_duration_us
    }

    /// Base sample spacing in microseconds.
    pub fn base_dt_us(&self) -> f64 {
        self.symbol_duration_us / f64::from(self.base_samples_per_symbol)
    }
}

/// Uniformly sampled real baseband signal.
///
/// Sample `i` covers the interval `[i, i+1) * dt`; the signal is held
/// piecewise-constant between base samples, which is the "analog" waveform
/// the encoding neuron integrates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    /// Base sample spacing in microseconds.
    pub dt_us: f64,
    /// Base samples per symbol; kept so receivers can recover the symbol grid.
    pub samples_per_symbol: u32,
    /// Amplitudes at the base rate.
    pub samples: Vec<f64>,
}

impl Waveform {
    /// Base sample rate in Hz (`samples_per_symbol / T_sym`).
    pub fn base_rate_hz(&self) -> f64 {
        1e6 / self.dt_us
    }

    /// Total duration in microseconds.
    pub fn duration_us(&self) -> f64 {
        self.samples.len() as f64 * self.dt_us
    }

    /// Start time of sample `i` in microseconds.
    pub fn sample_time_us(&self, i: usize) -> f64 {
        i as f64 * self.dt_us
    }
}

/// Kind of a symbol window within a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    /// One silent symbol of the noise-estimation preamble.
    Preamble,
    /// All `repetition` symbols carrying data bit `bit_index`.
    Data { bit_index: usize },
}

/// Half-open time window `[start_us, end_us)` within a frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolWindow {
    pub start_us: f64,
    pub end_us: f64,
    pub kind: WindowKind,
}

/// Renders the noiseless transmit waveform for `plan`.
pub fn build_frame(plan: &FramePlan) -> Result<Waveform> {
    plan.validate()?;
    let k = plan.base_samples_per_symbol as usize;
    let mut samples = Vec::with_capacity(plan.total_symbols() as usize * k);
    samples.resize(plan.preamble_symbols as usize * k, 0.0);
    for &bit in &plan.data_bits {
        let amplitude = if bit { 1.0 } else { -1.0 };
        for _ in 0..plan.repetition as usize * k {
            samples.push(amplitude);
        }
    }
    Ok(Waveform {
        dt_us: plan.base_dt_us(),
        samples_per_symbol: plan.base_samples_per_symbol,
        samples,
    })
}

/// Non-overlapping, contiguous windows covering the frame: one per preamble
/// symbol, then one per data bit spanning `repetition * T_sym`.
pub fn symbol_windows(plan: &FramePlan) -> Result<Vec<SymbolWindow>> {
    plan.validate()?;
    let t = plan.symbol_duration_us;
    let preamble = plan.preamble_symbols as usize;
    let mut windows = Vec::with_capacity(preamble + plan.data_bits.len());
    for i in 0..preamble {
        windows.push(SymbolWindow {
            start_us: i as f64 * t,
            end_us: (i + 1) as f64 * t,
            kind: WindowKind::Preamble,
        });
    }
    let n = plan.repetition as usize;
    for (bit_index, _) in plan.data_bits.iter().enumerate() {
        let start_symbol = preamble + bit_index * n;
        windows.push(SymbolWindow {
            start_us: start_symbol as f64 * t,
            end_us: (start_symbol + n) as f64 * t,
            kind: WindowKind::Data { bit_index },
        });
    }
    Ok(windows)
}
