//! Shared test oracles: a fixed-step LIF reference integrator independent of
//! the analytic engine, the Gaussian tail function, and a generator for
//! randomized piecewise-constant stimuli.
#![allow(dead_code)] // each integration test compiles its own view of this module

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use spikelink::LifParams;

/// One constant-input segment: `(input, duration_us)`.
pub type Segment = (f64, f64);

/// Fixed-step reference integrator: exponential membrane update on a 1 ns
/// grid, with linear interpolation of the crossing instant inside a step and
/// the restart integrated over the remainder of that step. Never solves the
/// crossing logarithm, so it is an independent check of the analytic engine.
pub fn stepped_lif_reference(params: &LifParams, segments: &[Segment], step_us: f64) -> Vec<f64> {
    assert!(params.leak_enabled && params.refractory_us == 0.0);
    let tau = params.tau_m_us;
    let mut v = params.v_rest;
    let mut t = 0.0_f64;
    let mut spikes = Vec::new();
    for &(input, duration) in segments {
        let asymptote = params.v_rest + input;
        let steps = (duration / step_us).round() as u64;
        let decay_full = (-step_us / tau).exp();
        for _ in 0..steps {
            let mut rem = step_us;
            let mut decay = decay_full;
            loop {
                if v >= params.v_th {
                    spikes.push(t + (step_us - rem));
                    v = params.v_reset;
                    continue;
                }
                let v_end = asymptote + (v - asymptote) * decay;
                if v_end >= params.v_th {
                    let frac = (params.v_th - v) / (v_end - v);
                    let dt_cross = frac * rem;
                    spikes.push(t + (step_us - rem) + dt_cross);
                    v = params.v_reset;
                    rem -= dt_cross;
                    decay = (-rem / tau).exp();
                } else {
                    v = v_end;
                    break;
                }
            }
            t += step_us;
        }
    }
    spikes
}

/// Runs the analytic engine over the same segments.
pub fn analytic_lif(params: &LifParams, segments: &[Segment]) -> Vec<f64> {
    let mut state = spikelink::LifState::at_rest(params);
    let mut times = Vec::new();
    for &(input, duration) in segments {
        let spikes = spikelink::integrate_interval(&mut state, params, input, duration).unwrap();
        times.extend_from_slice(spikes.times_us());
    }
    times
}

/// Random piecewise-constant stimulus with whole-nanosecond segment lengths
/// (so the 1 ns reference grid aligns with segment boundaries).
pub fn random_segments(seed: u64) -> (LifParams, Vec<Segment>) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let params = LifParams {
        tau_m_us: *[0.3, 0.5, 1.0].get(rng.random_range(0..3)).unwrap(),
        v_th: *[0.4, 0.5, 0.7].get(rng.random_range(0..3)).unwrap(),
        ..LifParams::default()
    };
    let count = rng.random_range(40..120);
    let segments = (0..count)
        .map(|_| {
            let amplitude = match rng.random_range(0..10) {
                0 => 0.0,
                1 => 1.0,
                2 => -1.0,
                _ => rng.random_range(-1.5..2.5),
            };
            let nanos: u64 = rng.random_range(100..=500);
            (amplitude, nanos as f64 * 1e-3)
        })
        .collect();
    (params, segments)
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Theoretical ideal-ML BER for rate-1/n repetition BPSK under the
/// bandwidth-scaled noise convention: `Q(sqrt(2 n * 10^(snr/10)))`.
pub fn ideal_ml_ber(snr_db: f64, repetition: u32) -> f64 {
    q_function((2.0 * f64::from(repetition) * 10f64.powf(snr_db / 10.0)).sqrt())
}
