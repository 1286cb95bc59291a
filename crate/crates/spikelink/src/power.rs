//! Energy and power bookkeeping for the spiking front-end, with the cited
//! low-resolution ADC consumption band as the reference point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Energy model of the spiking front-end.
///
/// Each spike charges and discharges the membrane capacitor once, costing
/// about `1/2 C_m v_th^2`; published analog LIF implementations fall in the
/// 1-10 pJ/spike range. Dynamic (spike) energy only; static leakage of the
/// analog circuits is out of scope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerModel {
    /// Energy per spike event in picojoules.
    pub energy_per_spike_pj: f64,
    /// Membrane capacitance in picofarads; with `v_th_volts` it overrides
    /// `energy_per_spike_pj` via `1/2 C_m v_th^2`.
    pub c_m_pf: Option<f64>,
    /// Threshold voltage in volts for the capacitor-energy derivation.
    pub v_th_volts: Option<f64>,
    /// Cited consumption band for a low-resolution ADC at a few MS/s, in mW.
    /// This is a reference figure, not a model.
    pub adc_power_mw: (f64, f64),
    /// Transmission-gate contribution at ~kHz switching, in picowatts.
    pub gate_power_pw: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        Self {
            energy_per_spike_pj: 5.0,
            c_m_pf: None,
            v_th_volts: None,
            adc_power_mw: (0.5, 1.0),
            gate_power_pw: 5.0,
        }
    }
}

impl PowerModel {
    pub fn validate(&self) -> Result<()> {
        let energy = self.effective_energy_per_spike_pj();
        if !energy.is_finite() || energy <= 0.0 {
            return Err(Error::InvalidParameter(
                "energy per spike must be positive".into(),
            ));
        }
        let (low, high) = self.adc_power_mw;
        if !low.is_finite() || !high.is_finite() || low <= 0.0 || low > high {
            return Err(Error::InvalidParameter(
                "adc_power_mw must be a positive (low, high) band".into(),
            ));
        }
        Ok(())
    }

    /// Energy per spike, using the capacitor derivation when both `c_m_pf`
    /// and `v_th_volts` are set.
    pub fn effective_energy_per_spike_pj(&self) -> f64 {
        match (self.c_m_pf, self.v_th_volts) {
            (Some(c_pf), Some(v)) => 0.5 * c_pf * v * v,
            _ => self.energy_per_spike_pj,
        }
    }
}

/// Spike activity and resulting power of one neuron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuronPower {
    pub neuron: String,
    pub spikes: u64,
    pub energy_pj: f64,
    pub avg_power_uw: f64,
}

/// Power estimate of the whole front-end over an observation span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub neurons: Vec<NeuronPower>,
    pub gate_power_uw: f64,
    pub total_energy_pj: f64,
    /// Dynamic neuron power plus the gate contribution.
    pub total_power_uw: f64,
    pub elapsed_us: f64,
    pub symbol_rate_ksym_s: Option<f64>,
    pub adc_reference_mw: (f64, f64),
}

/// Comparison of the front-end total against the ADC reference band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdcComparison {
    pub neuromorphic_total_uw: f64,
    pub adc_band_mw: (f64, f64),
    /// ADC sample rate implied by the symbol rate, when known.
    pub adc_sample_rate_msps: Option<f64>,
    /// Front-end total over the band's low end.
    pub ratio_vs_low_end: f64,
    /// Set when the front-end total is below the low end of the band.
    pub neuromorphic_lower: bool,
}

/// Converts per-neuron spike counts over `elapsed_us` into energy and power.
///
/// Power falls out directly in microwatts because pJ / us = uW. Pass
/// `symbol_duration_us` to report the implied symbol rate.
pub fn estimate_front_end_power(
    spike_counts: &[(String, u64)],
    elapsed_us: f64,
    symbol_duration_us: Option<f64>,
    model: &PowerModel,
) -> Result<PowerReport> {
    model.validate()?;
    if !elapsed_us.is_finite() || elapsed_us <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "elapsed_us must be positive, got {elapsed_us}"
        )));
    }
    let energy_per_spike = model.effective_energy_per_spike_pj();
    let neurons: Vec<NeuronPower> = spike_counts
        .iter()
        .map(|(neuron, spikes)| {
            let energy_pj = *spikes as f64 * energy_per_spike;
            NeuronPower {
                neuron: neuron.clone(),
                spikes: *spikes,
                energy_pj,
                avg_power_uw: energy_pj / elapsed_us,
            }
        })
        .collect();
    let gate_power_uw = model.gate_power_pw * 1e-6;
    let total_energy_pj: f64 =
        neurons.iter().map(|n| n.energy_pj).sum::<f64>() + gate_power_uw * elapsed_us;
    let total_power_uw = neurons.iter().map(|n| n.avg_power_uw).sum::<f64>() + gate_power_uw;
    Ok(PowerReport {
        neurons,
        gate_power_uw,
        total_energy_pj,
        total_power_uw,
        elapsed_us,
        symbol_rate_ksym_s: symbol_duration_us.map(|t| 1000.0 / t),
        adc_reference_mw: model.adc_power_mw,
    })
}

/// Relates a front-end power report to the ADC reference band.
pub fn compare_with_adc(
    report: &PowerReport,
    adc_samples_per_symbol: u32,
    model: &PowerModel,
) -> AdcComparison {
    let low_end_uw = model.adc_power_mw.0 * 1000.0;
    AdcComparison {
        neuromorphic_total_uw: report.total_power_uw,
        adc_band_mw: model.adc_power_mw,
        adc_sample_rate_msps: report
            .symbol_rate_ksym_s
            .map(|ksym| ksym * f64::from(adc_samples_per_symbol) / 1000.0),
        ratio_vs_low_end: report.total_power_uw / low_end_uw,
        neuromorphic_lower: report.total_power_uw < low_end_uw,
    }
}
