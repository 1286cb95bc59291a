//! Statistical sanity of sweep results across the SNR grid.

use spikelink::{run_ber_sweep, AdcConfig, DetectorSpec, ExperimentSpec};

#[test]
fn ber_non_increasing_in_snr_within_ci() {
    let spec = ExperimentSpec {
        snr_points_db: (-1..=5).map(|s| f64::from(2 * s)).collect(),
        trials_per_point: 5_000,
        bits_per_frame: 5,
        detectors: vec![DetectorSpec::IdealMl, DetectorSpec::Adc(AdcConfig::with_rate(8))],
        ..Default::default()
    };
    let records = run_ber_sweep(&spec).unwrap();
    for detector in ["ideal-ml", "adc-8"] {
        let curve: Vec<_> = records.iter().filter(|r| r.detector == detector).collect();
        assert_eq!(curve.len(), spec.snr_points_db.len());
        for pair in curve.windows(2) {
            let (lower_snr, higher_snr) = (pair[0], pair[1]);
            assert!(
                higher_snr.ber <= lower_snr.ber || higher_snr.ci95_low <= lower_snr.ci95_high,
                "{detector}: BER rose from {:.3e} at {} dB to {:.3e} at {} dB beyond CI overlap",
                lower_snr.ber,
                lower_snr.snr_db,
                higher_snr.ber,
                higher_snr.snr_db
            );
        }
    }
}
