//! Machine-readable result emission: BER tables and raster traces as CSV,
//! everything mirrored as JSON, plus the metadata sidecar describing the
//! conventions a run used.

use serde::{Deserialize, Serialize};

use crate::harness::{BerRecord, ExperimentSpec};
use crate::power::PowerReport;

/// One row of a time-series raster dump. `series` is one of `tx`, `rx`,
/// `spike`; spike rows carry value 1 at the spike time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterRow {
    pub time_us: f64,
    pub series: String,
    pub value: f64,
}

/// Sidecar describing the run: seed, conventions and modeling choices that
/// are not visible in the result rows themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub master_seed: u64,
    pub noise_model: String,
    pub trials_per_point: u64,
    pub bits_per_frame: usize,
    pub symbol_duration_us: f64,
    pub base_samples_per_symbol: u32,
    pub repetition: u32,
    pub preamble_symbols: u32,
    pub notes: Vec<String>,
}

impl RunMetadata {
    pub fn for_experiment(spec: &ExperimentSpec) -> Self {
        Self {
            tool: "spikelink".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            master_seed: spec.master_seed,
            noise_model: spec.noise_model.to_string(),
            trials_per_point: spec.trials_per_point,
            bits_per_frame: spec.bits_per_frame,
            symbol_duration_us: spec.symbol_duration_us,
            base_samples_per_symbol: spec.base_samples_per_symbol,
            repetition: spec.repetition,
            preamble_symbols: spec.preamble_symbols,
            notes: vec![
                "noise model: bandwidth-scaled gives sigma_b^2 = K_sym / (2 * 10^(snr/10)); \
                 per-sample gives sigma_b^2 = 10^(-snr/10)"
                    .into(),
                "adc: uniform mid-rise quantizer, full scale +/-2.0, values on a bin edge \
                 go to the upper bin"
                    .into(),
                "decision ties (zero sums, potential exactly at threshold) resolve to +1".into(),
            ],
        }
    }
}

pub fn ber_records_to_csv(records: &[BerRecord]) -> csv::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in records {
        writer.serialize(record)?;
    }
    let bytes = writer.into_inner().expect("flush to Vec cannot fail");
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn ber_records_from_csv(data: &str) -> csv::Result<Vec<BerRecord>> {
    csv::Reader::from_reader(data.as_bytes())
        .deserialize()
        .collect()
}

pub fn raster_rows_to_csv(rows: &[RasterRow]) -> csv::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().expect("flush to Vec cannot fail");
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn raster_rows_from_csv(data: &str) -> csv::Result<Vec<RasterRow>> {
    csv::Reader::from_reader(data.as_bytes())
        .deserialize()
        .collect()
}

pub fn ber_records_to_json(records: &[BerRecord]) -> serde_json::Result<String> {
    serde_json::to_string_pretty(records)
}

pub fn power_report_to_json(report: &PowerReport) -> serde_json::Result<String> {
    serde_json::to_string_pretty(report)
}

/// Flat CSV view of a power report: one row per neuron plus gate and total.
pub fn power_report_to_csv(report: &PowerReport) -> csv::Result<String> {
    #[derive(Serialize)]
    struct Row<'a> {
        component: &'a str,
        spikes: Option<u64>,
        energy_pj: f64,
        avg_power_uw: f64,
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    for neuron in &report.neurons {
        writer.serialize(Row {
            component: &neuron.neuron,
            spikes: Some(neuron.spikes),
            energy_pj: neuron.energy_pj,
            avg_power_uw: neuron.avg_power_uw,
        })?;
    }
    writer.serialize(Row {
        component: "gate",
        spikes: None,
        energy_pj: report.gate_power_uw * report.elapsed_us,
        avg_power_uw: report.gate_power_uw,
    })?;
    writer.serialize(Row {
        component: "total",
        spikes: None,
        energy_pj: report.total_energy_pj,
        avg_power_uw: report.total_power_uw,
    })?;
    let bytes = writer.into_inner().expect("flush to Vec cannot fail");
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_ber_sweep, DetectorSpec};

    fn sample_records() -> Vec<BerRecord> {
        let spec = ExperimentSpec {
            snr_points_db: vec![0.0, 2.0],
            trials_per_point: 50,
            bits_per_frame: 10,
            detectors: vec![
                DetectorSpec::IdealMl,
                DetectorSpec::Adc(crate::digital_rx::AdcConfig::with_rate(8)),
                DetectorSpec::NeuroAdaptive,
            ],
            preamble_symbols: 20,
            ..Default::default()
        };
        run_ber_sweep(&spec).unwrap()
    }

    #[test]
    fn csv_header_is_pinned() {
        let records = sample_records();
        let csv = ber_records_to_csv(&records).unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "snr_db,detector,repetition,samples_per_symbol,preamble_symbols,trials,bit_errors,ber,ci95_low,ci95_high"
        );
    }

    #[test]
    fn ber_csv_round_trips() {
        let records = sample_records();
        let csv = ber_records_to_csv(&records).unwrap();
        let parsed = ber_records_from_csv(&csv).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn raster_csv_round_trips() {
        let rows = vec![
            RasterRow {
                time_us: 0.0,
                series: "tx".into(),
                value: 1.0,
            },
            RasterRow {
                time_us: 0.346_573_5,
                series: "spike".into(),
                value: 1.0,
            },
        ];
        let csv = raster_rows_to_csv(&rows).unwrap();
        assert!(csv.starts_with("time_us,series,value\n"));
        assert_eq!(raster_rows_from_csv(&csv).unwrap(), rows);
    }

    #[test]
    fn metadata_mentions_conventions() {
        let meta = RunMetadata::for_experiment(&ExperimentSpec::default());
        let json = serde_json::to_string(&meta).unwrap();
        assert!(json.contains("bandwidth-scaled"));
        assert!(json.contains("mid-rise"));
        assert_eq!(meta.master_seed, 42);
    }

    #[test]
    fn power_csv_has_component_rows() {
        let report = crate::power::estimate_front_end_power(
            &[("selif".to_string(), 14), ("sdlif".to_string(), 14)],
            5.0,
            Some(5.0),
            &crate::power::PowerModel::default(),
        )
        .unwrap();
        let csv = power_report_to_csv(&report).unwrap();
        assert!(csv.starts_with("component,spikes,energy_pj,avg_power_uw\n"));
        assert!(csv.contains("selif,14,70.0,14.0"));
        assert!(csv.contains("total,,"));
    }
}
