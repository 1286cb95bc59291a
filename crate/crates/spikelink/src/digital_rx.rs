//! Conventional digital baseline: b-bit ADC sampling plus the sum-sign ML
//! detector, and an unquantized ideal-ML oracle over all base samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{symbol_windows, FramePlan, Waveform, WindowKind};

/// Uniform mid-rise ADC model.
///
/// Inputs are clipped to `[-full_scale, +full_scale]`, the range is split
/// into `2^bits` equal bins of width `2 full_scale / 2^bits`, and each sample
/// reconstructs at its bin center. A value exactly on a bin edge belongs to
/// the upper bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdcConfig {
    /// Quantizer resolution in bits.
    pub bits: u32,
    /// Samples taken per symbol; must divide the waveform base rate.
    pub samples_per_symbol: u32,
    /// Clip range: inputs are limited to `[-full_scale, +full_scale]`.
    pub full_scale: f64,
}

impl Default for AdcConfig {
    fn default() -> Self {
        Self {
            bits: 2,
            samples_per_symbol: 64,
            full_scale: 2.0,
        }
    }
}

impl AdcConfig {
    pub fn with_rate(samples_per_symbol: u32) -> Self {
        Self {
            samples_per_symbol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits == 0 || self.bits > 32 {
            return Err(Error::InvalidParameter(format!(
                "adc bits must be in 1..=32, got {}",
                self.bits
            )));
        }
        if self.samples_per_symbol == 0 {
            return Err(Error::InvalidParameter(
                "samples_per_symbol must be >= 1".into(),
            ));
        }
        if !self.full_scale.is_finite() || self.full_scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "full_scale must be positive, got {}",
                self.full_scale
            )));
        }
        Ok(())
    }

    /// Bin width of the quantizer.
    pub fn step(&self) -> f64 {
        2.0 * self.full_scale / (1u64 << self.bits) as f64
    }

    /// Quantizes a single sample to its reconstruction level.
    pub fn quantize(&self, x: f64) -> f64 {
        let levels = 1i64 << self.bits;
        let step = self.step();
        let clipped = x.clamp(-self.full_scale, self.full_scale);
        let index = (((clipped + self.full_scale) / step).floor() as i64).clamp(0, levels - 1);
        -self.full_scale + (index as f64 + 0.5) * step
    }
}

/// Point-samples the waveform at the ADC rate and quantizes.
///
/// Takes every `K_sym / samples_per_symbol`-th base sample starting at
/// index 0; no anti-alias averaging.
pub fn sample_and_quantize(w: &Waveform, cfg: &AdcConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.samples_per_symbol > w.samples_per_symbol
        || !w.samples_per_symbol.is_multiple_of(cfg.samples_per_symbol)
    {
        return Err(Error::IncompatibleRate {
            samples_per_symbol: cfg.samples_per_symbol,
            base_samples_per_symbol: w.samples_per_symbol,
        });
    }
    let stride = (w.samples_per_symbol / cfg.samples_per_symbol) as usize;
    Ok(w.samples
        .iter()
        .step_by(stride)
        .map(|&s| cfg.quantize(s))
        .collect())
}

/// Sum-sign detector over quantized levels: each bit spans
/// `repetition * samples_per_symbol` consecutive levels; the decision is the
/// sign of their sum, with ties resolved to `+1`.
pub fn digital_detect(levels: &[f64], repetition: u32, samples_per_symbol: u32) -> Vec<bool> {
    let chunk = (repetition * samples_per_symbol) as usize;
    assert!(chunk > 0, "repetition and samples_per_symbol must be >= 1");
    debug_assert!(
        levels.len().is_multiple_of(chunk),
        "level count {} not divisible by {chunk}",
        levels.len()
    );
    levels
        .chunks_exact(chunk)
        .map(|c| c.iter().sum::<f64>() >= 0.0)
        .collect()
}

/// Ideal maximum-likelihood oracle: per data bit, the sign of the sum of all
/// `repetition * K_sym` unquantized base samples. Ties resolve to `+1`.
pub fn ideal_ml_detect(w: &Waveform, plan: &FramePlan) -> Result<Vec<bool>> {
    let windows = symbol_windows(plan)?;
    let k = plan.base_samples_per_symbol as usize;
    let n = plan.repetition as usize;
    let preamble = plan.preamble_symbols as usize;
    let mut bits = Vec::with_capacity(plan.data_bits.len());
    for window in windows {
        if let WindowKind::Data { bit_index } = window.kind {
            let start = (preamble + bit_index * n) * k;
            let end = start + n * k;
            let sum: f64 = w.samples[start..end].iter().sum();
            bits.push(sum >= 0.0);
        }
    }
    Ok(bits)
}

/// Log-likelihood ratio of `+1` versus `-1` for Gaussian noise of variance
/// `sigma_sq`: `lambda = (2 / sigma_sq) * sum(samples)`.
pub fn compute_llr(samples: &[f64], sigma_sq: f64) -> Result<f64> {
    if !sigma_sq.is_finite() || sigma_sq <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma_sq must be positive, got {sigma_sq}"
        )));
    }
    Ok(2.0 / sigma_sq * samples.iter().sum::<f64>())
}
