//! Event-exact leaky integrate-and-fire neuron for piecewise-constant inputs.
//!
//! The membrane obeys `tau_m dV/dt = -(V - V_rest) + I(t)`. Over an interval
//! of constant input the trajectory has the closed form
//! `V(t) = V_rest + I + (V0 - V_rest - I) exp(-t / tau_m)`, and a threshold
//! crossing is solved analytically as
//! `t* = tau_m ln((V_rest + I - V0) / (V_rest + I - v_th))`.
//! There is no integration step size to tune; spike times are limited only by
//! floating-point precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Waveform;

/// Neuron parameters.
///
/// Defaults are the encoding neuron's nominal operating point: `tau_m =
/// 0.5 us`, `v_th = 0.5`, rest and reset at 0, no refractory period, leak
/// enabled. A unit input then fires every `0.5 ln 2 ~= 0.34657 us`, about
/// 14.4 spikes per 5 us symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifParams {
    /// Membrane time constant in microseconds.
    pub tau_m_us: f64,
    /// Resting potential.
    pub v_rest: f64,
    /// Firing threshold; a spike is emitted when `V >= v_th`.
    pub v_th: f64,
    /// Potential immediately after a spike.
    pub v_reset: f64,
    /// Post-spike dead time in microseconds; the membrane is held at
    /// `v_reset` for its duration.
    pub refractory_us: f64,
    /// With the leak disabled the neuron is a perfect integrator:
    /// `V(t) = V0 + I t / tau_m`.
    pub leak_enabled: bool,
}

impl Default for LifParams {
    fn default() -> Self {
        Self {
            tau_m_us: 0.5,
            v_rest: 0.0,
            v_th: 0.5,
            v_reset: 0.0,
            refractory_us: 0.0,
            leak_enabled: true,
        }
    }
}

impl LifParams {
    pub fn validate(&self) -> Result<()> {
        if !self.tau_m_us.is_finite() || self.tau_m_us <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tau_m_us must be positive, got {}",
                self.tau_m_us
            )));
        }
        for (name, value) in [
            ("v_rest", self.v_rest),
            ("v_th", self.v_th),
            ("v_reset", self.v_reset),
            ("refractory_us", self.refractory_us),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if self.v_th <= self.v_rest {
            return Err(Error::InvalidParameter(
                "v_th must exceed v_rest".into(),
            ));
        }
        if self.v_th <= self.v_reset {
            return Err(Error::InvalidParameter(
                "v_th must exceed v_reset".into(),
            ));
        }
        if self.refractory_us < 0.0 {
            return Err(Error::InvalidParameter(
                "refractory_us must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Interspike interval for a constant supra-threshold input held from
    /// reset: `tau_m ln((V_rest + I - v_reset) / (V_rest + I - v_th))`,
    /// plus the refractory period.
    pub fn interspike_interval_us(&self, input: f64) -> Option<f64> {
        let asymptote = self.v_rest + input;
        if self.leak_enabled {
            if asymptote <= self.v_th {
                return None;
            }
            let isi =
                self.tau_m_us * ((asymptote - self.v_reset) / (asymptote - self.v_th)).ln();
            Some(isi + self.refractory_us)
        } else {
            if input <= 0.0 {
                return None;
            }
            Some((self.v_th - self.v_reset) * self.tau_m_us / input + self.refractory_us)
        }
    }
}

/// Mutable integration state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifState {
    /// Membrane potential.
    pub v: f64,
    /// Current simulation time in microseconds.
    pub t_us: f64,
    /// End of the running refractory period, if any.
    pub refractory_until_us: f64,
}

impl LifState {
    /// State at rest at time zero.
    pub fn at_rest(params: &LifParams) -> Self {
        Self {
            v: params.v_rest,
            t_us: 0.0,
            refractory_until_us: f64::NEG_INFINITY,
        }
    }

    /// State at rest at an arbitrary start time.
    pub fn at_rest_from(params: &LifParams, t_us: f64) -> Self {
        Self {
            t_us,
            ..Self::at_rest(params)
        }
    }
}

/// Ordered spike timestamps emitted by one neuron.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpikeTrain {
    times_us: Vec<f64>,
}

impl SpikeTrain {
    /// Builds a train from raw timestamps, validating strict ordering.
    pub fn new(times_us: Vec<f64>) -> Result<Self> {
        if times_us.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter(
                "spike times must be finite".into(),
            ));
        }
        for pair in times_us.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParameter(format!(
                    "spike times must be strictly increasing: {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self { times_us })
    }

    pub fn times_us(&self) -> &[f64] {
        &self.times_us
    }

    pub fn len(&self) -> usize {
        self.times_us.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_us.is_empty()
    }

    /// Number of spikes in the half-open window `[start_us, end_us)`.
    ///
    /// A spike exactly on a window boundary belongs to the later window.
    pub fn count_in(&self, start_us: f64, end_us: f64) -> u64 {
        let lo = self.times_us.partition_point(|&t| t < start_us);
        let hi = self.times_us.partition_point(|&t| t < end_us);
        (hi - lo) as u64
    }

    fn push(&mut self, t_us: f64) {
        debug_assert!(self.times_us.last().is_none_or(|&last| t_us > last));
        self.times_us.push(t_us);
    }
}

/// Time until the trajectory from `v0` reaches threshold, for constant input,
/// or `None` if it never does.
#[inline]
fn crossing_time(v0: f64, input: f64, params: &LifParams) -> Option<f64> {
    if v0 >= params.v_th {
        return Some(0.0);
    }
    if params.leak_enabled {
        let asymptote = params.v_rest + input;
        if asymptote <= params.v_th {
            return None;
        }
        Some(params.tau_m_us * ((asymptote - v0) / (asymptote - params.v_th)).ln())
    } else {
        if input <= 0.0 {
            return None;
        }
        Some((params.v_th - v0) * params.tau_m_us / input)
    }
}

/// Membrane value after coasting for `h_us` without crossing threshold.
/// `decay` must equal `exp(-h_us / tau_m)` when the leak is enabled.
#[inline]
fn coast(v0: f64, input: f64, decay: f64, h_us: f64, params: &LifParams) -> f64 {
    if params.leak_enabled {
        let asymptote = params.v_rest + input;
        asymptote + (v0 - asymptote) * decay
    } else {
        v0 + input * h_us / params.tau_m_us
    }
}

/// Core update shared by [`integrate_interval`] and [`run_on_waveform`];
/// `decay_full` must equal `exp(-dt_us / tau_m)`.
fn integrate_with_decay(
    state: &mut LifState,
    params: &LifParams,
    input: f64,
    dt_us: f64,
    decay_full: f64,
    spikes: &mut SpikeTrain,
) -> Result<()> {
    if !input.is_finite() {
        return Err(Error::InvalidStimulus);
    }
    let interval_start = state.t_us;
    let mut elapsed = 0.0;
    let mut remaining = dt_us;

    if state.refractory_until_us > interval_start {
        let hold = (state.refractory_until_us - interval_start).min(remaining);
        state.v = params.v_reset;
        elapsed += hold;
        remaining -= hold;
    }

    while remaining > 0.0 {
        match crossing_time(state.v, input, params) {
            Some(tc) if tc <= remaining => {
                let spike_time = interval_start + (elapsed + tc);
                // An input so large that the interspike interval underflows
                // would stall the sweep at a repeated timestamp.
                if spikes.times_us.last().is_some_and(|&last| spike_time <= last) {
                    return Err(Error::InvalidStimulus);
                }
                spikes.push(spike_time);
                state.v = params.v_reset;
                elapsed += tc;
                remaining -= tc;
                if params.refractory_us > 0.0 {
                    state.refractory_until_us = spike_time + params.refractory_us;
                    let hold = params.refractory_us.min(remaining);
                    elapsed += hold;
                    remaining -= hold;
                }
            }
            _ => {
                let decay = if remaining == dt_us {
                    decay_full
                } else {
                    (-remaining / params.tau_m_us).exp()
                };
                state.v = coast(state.v, input, decay, remaining, params);
                remaining = 0.0;
            }
        }
    }
    state.t_us = interval_start + dt_us;
    Ok(())
}

/// Advances the neuron over one interval of constant input, returning spikes
/// emitted within it. Multiple spikes per interval are allowed; refractory
/// periods are honored across interval boundaries.
pub fn integrate_interval(
    state: &mut LifState,
    params: &LifParams,
    input: f64,
    dt_us: f64,
) -> Result<SpikeTrain> {
    params.validate()?;
    if !dt_us.is_finite() || dt_us <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "dt_us must be positive, got {dt_us}"
        )));
    }
    let decay_full = if params.leak_enabled {
        (-dt_us / params.tau_m_us).exp()
    } else {
        1.0
    };
    let mut spikes = SpikeTrain::default();
    integrate_with_decay(state, params, input, dt_us, decay_full, &mut spikes)?;
    Ok(spikes)
}

/// Runs the neuron over every base sample of a waveform.
///
/// Equivalent to concatenating [`integrate_interval`] over the samples; the
/// per-sample decay factor is hoisted since the base spacing is uniform.
pub fn run_on_waveform(
    params: &LifParams,
    w: &Waveform,
    initial: LifState,
) -> Result<SpikeTrain> {
    params.validate()?;
    if w.samples.is_empty() {
        return Err(Error::InvalidParameter("waveform is empty".into()));
    }
    if !w.dt_us.is_finite() || w.dt_us <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "waveform dt_us must be positive, got {}",
            w.dt_us
        )));
    }
    let decay_full = if params.leak_enabled {
        (-w.dt_us / params.tau_m_us).exp()
    } else {
        1.0
    };
    let mut state = initial;
    let mut spikes = SpikeTrain::default();
    for &sample in &w.samples {
        integrate_with_decay(&mut state, params, sample, w.dt_us, decay_full, &mut spikes)?;
    }
    Ok(spikes)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ISI_UNIT_INPUT_US: f64 = 0.346_573_590_279_972_65; // 0.5 * ln 2

    fn unit_waveform(amplitude: f64, symbols: usize, k: u32) -> Waveform {
        Waveform {
            dt_us: 5.0 / f64::from(k),
            samples_per_symbol: k,
            samples: vec![amplitude; symbols * k as usize],
        }
    }

    #[test]
    fn first_spike_matches_closed_form() {
        let params = LifParams::default();
        let mut state = LifState::at_rest(&params);
        let spikes = integrate_interval(&mut state, &params, 1.0, 5.0).unwrap();
        let first = spikes.times_us()[0];
        // tau ln(1 / (1 - v_th)) = 0.5 ln 2 ~= 0.34657 us, within 1 ns.
        assert!((first - 0.346_57).abs() < 1e-3);
        assert!((first - ISI_UNIT_INPUT_US).abs() < 1e-12);
    }

    #[test]
    fn subthreshold_input_never_fires() {
        let params = LifParams::default();
        let mut state = LifState::at_rest(&params);
        let spikes = integrate_interval(&mut state, &params, 0.4, 1000.0).unwrap();
        assert!(spikes.is_empty());
        // The membrane settles at the asymptote below threshold.
        assert!((state.v - 0.4).abs() < 1e-9);
    }

    #[test]
    fn asymptote_equal_to_threshold_never_fires() {
        let params = LifParams::default();
        let mut state = LifState::at_rest(&params);
        let spikes = integrate_interval(&mut state, &params, 0.5, 1000.0).unwrap();
        assert!(spikes.is_empty());
    }

    #[test]
    fn unit_input_fires_14_times_in_5us() {
        let params = LifParams::default();
        let mut state = LifState::at_rest(&params);
        let spikes = integrate_interval(&mut state, &params, 1.0, 5.0).unwrap();
        assert_eq!(spikes.len(), 14);
        // Interspike interval equals the closed form exactly.
        for pair in spikes.times_us().windows(2) {
            assert!((pair[1] - pair[0] - ISI_UNIT_INPUT_US).abs() < 1e-12);
        }
    }

    #[test]
    fn waveform_run_matches_single_interval() {
        let params = LifParams::default();
        let w = unit_waveform(1.0, 1, 64);
        let spikes = run_on_waveform(&params, &w, LifState::at_rest(&params)).unwrap();
        assert_eq!(spikes.len(), 14);
        let mut state = LifState::at_rest(&params);
        let whole = integrate_interval(&mut state, &params, 1.0, 5.0).unwrap();
        for (a, b) in spikes.times_us().iter().zip(whole.times_us()) {
            assert!((a - b).abs() < 1e-9, "sampled {a} vs whole-interval {b}");
        }
    }

    #[test]
    fn all_zero_waveform_is_silent() {
        let params = LifParams::default();
        let w = unit_waveform(0.0, 3, 64);
        let spikes = run_on_waveform(&params, &w, LifState::at_rest(&params)).unwrap();
        assert!(spikes.is_empty());
    }

    #[test]
    fn negative_input_is_silent() {
        let params = LifParams::default();
        let w = unit_waveform(-1.0, 3, 64);
        let spikes = run_on_waveform(&params, &w, LifState::at_rest(&params)).unwrap();
        assert!(spikes.is_empty());
    }

    #[test]
    fn refractory_period_stretches_the_interval() {
        let params = LifParams {
            refractory_us: 0.2,
            ..Default::default()
        };
        let mut state = LifState::at_rest(&params);
        let spikes = integrate_interval(&mut state, &params, 1.0, 5.0).unwrap();
        // Spikes at isi + k (isi + refractory): floor((5 - isi)/(isi + 0.2)) + 1.
        let isi = ISI_UNIT_INPUT_US;
        let expected = ((5.0 - isi) / (isi + 0.2)).floor() as usize + 1;
        assert_eq!(spikes.len(), expected);
        for pair in spikes.times_us().windows(2) {
            assert!((pair[1] - pair[0] - (isi + 0.2)).abs() < 1e-12);
        }
    }

    #[test]
    fn refractory_survives_interval_boundaries() {
        let params = LifParams {
            refractory_us: 0.75,
            ..Default::default()
        };
        let mut state = LifState::at_rest(&params);
        let mut all = Vec::new();
        // 0.1 us micro-intervals: refractory spans several of them.
        for _ in 0..50 {
            let s = integrate_interval(&mut state, &params, 1.0, 0.1).unwrap();
            all.extend_from_slice(s.times_us());
        }
        for pair in all.windows(2) {
            assert!(pair[1] - pair[0] >= 0.75 - 1e-12);
        }
    }

    #[test]
    fn perfect_integrator_ramps_linearly() {
        let params = LifParams {
            leak_enabled: false,
            ..Default::default()
        };
        let mut state = LifState::at_rest(&params);
        let spikes = integrate_interval(&mut state, &params, 0.1, 10.0).unwrap();
        // dV/dt = I / tau = 0.2 per us; threshold 0.5 reached every 2.5 us.
        assert_eq!(spikes.len(), 4);
        assert!((spikes.times_us()[0] - 2.5).abs() < 1e-12);
        assert!((spikes.times_us()[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_input_rejected() {
        let params = LifParams::default();
        let mut state = LifState::at_rest(&params);
        assert_eq!(
            integrate_interval(&mut state, &params, f64::NAN, 1.0).unwrap_err(),
            Error::InvalidStimulus
        );
        assert_eq!(
            integrate_interval(&mut state, &params, f64::INFINITY, 1.0).unwrap_err(),
            Error::InvalidStimulus
        );
    }

    #[test]
    fn empty_waveform_rejected() {
        let params = LifParams::default();
        let w = Waveform {
            dt_us: 1.0,
            samples_per_symbol: 1,
            samples: vec![],
        };
        assert!(run_on_waveform(&params, &w, LifState::at_rest(&params)).is_err());
    }

    #[test]
    fn spike_count_monotone_in_input() {
        let params = LifParams::default();
        let mut counts = Vec::new();
        for input in [0.6, 0.8, 1.0, 1.5, 2.0, 4.0] {
            let mut state = LifState::at_rest(&params);
            counts.push(integrate_interval(&mut state, &params, input, 20.0).unwrap().len());
        }
        for pair in counts.windows(2) {
            assert!(pair[1] >= pair[0], "counts not monotone: {counts:?}");
        }
    }

    #[test]
    fn time_shift_shifts_spikes() {
        let params = LifParams::default();
        let inputs = [1.3, -0.4, 0.9, 2.1, 0.2, 1.7];
        let dt = 0.25; // power of two: time accumulation is exact
        let shift = 8.0;
        let run = |t0: f64| {
            let mut state = LifState::at_rest_from(&params, t0);
            let mut times = Vec::new();
            for &i in &inputs {
                let s = integrate_interval(&mut state, &params, i, dt).unwrap();
                times.extend_from_slice(s.times_us());
            }
            times
        };
        let base = run(0.0);
        let shifted = run(shift);
        assert!(!base.is_empty());
        assert_eq!(base.len(), shifted.len());
        for (a, b) in base.iter().zip(&shifted) {
            assert!((b - a - shift).abs() < 1e-9);
        }
    }

    #[test]
    fn interspike_interval_closed_form() {
        let params = LifParams::default();
        let input = 0.8;
        let expected = 0.5 * (0.8f64 / 0.3).ln();
        assert!((params.interspike_interval_us(input).unwrap() - expected).abs() < 1e-15);
        assert!(params.interspike_interval_us(0.5).is_none());
        // Rate function: spikes over a long horizon approach horizon / isi.
        let mut state = LifState::at_rest(&params);
        let horizon = 200.0;
        let spikes = integrate_interval(&mut state, &params, input, horizon).unwrap();
        assert_eq!(spikes.len() as f64, (horizon / expected).floor());
    }

    #[test]
    fn invalid_params_rejected() {
        let bad_tau = LifParams {
            tau_m_us: 0.0,
            ..Default::default()
        };
        assert!(bad_tau.validate().is_err());
        let bad_threshold = LifParams {
            v_th: -0.1,
            v_reset: 0.0,
            ..Default::default()
        };
        assert!(bad_threshold.validate().is_err());
    }

    #[test]
    fn spike_train_ordering_validated() {
        assert!(SpikeTrain::new(vec![1.0, 2.0, 3.0]).is_ok());
        assert!(SpikeTrain::new(vec![1.0, 1.0]).is_err());
        assert!(SpikeTrain::new(vec![2.0, 1.0]).is_err());
        assert!(SpikeTrain::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn count_in_uses_half_open_windows() {
        let train = SpikeTrain::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(train.count_in(0.0, 2.0), 2);
        assert_eq!(train.count_in(2.0, 4.0), 2);
        assert_eq!(train.count_in(1.0, 1.0), 0);
        assert_eq!(train.count_in(3.0, 100.0), 1);
    }
}
