use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate_run, EnergyCoefficients, EnergyReport};
use crate::event::AerEvent;
use crate::memory::{mem_geometry, MemType};
use crate::pipeline::{run, Processor, TimingConfig};
use crate::reference::Network;

pub const SWEEP_CSV_HEADER: &str = "P,mem_type,f_hz,e_sop_J,throughput_sops,area_mm2,et";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub parallelism: usize,
    pub mem_type: MemType,
    pub f_clk_hz: f64,
}

impl SweepPoint {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.parallelism
            .cmp(&other.parallelism)
            .then(self.mem_type.cmp(&other.mem_type))
            .then(self.f_clk_hz.total_cmp(&other.f_clk_hz))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub report: EnergyReport,
}

/// Network, event stream and fixed design parameters evaluated at every
/// sweep point. The network is re-banked to each point's parallelism.
#[derive(Debug, Clone)]
pub struct SweepWorkload {
    pub network: Network,
    pub events: Vec<AerEvent>,
    pub bank_bits: usize,
    pub overhead_cycles: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    /// Ordered by (P, memory type, clock).
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<(SweepPoint, String)>,
}

impl SweepTable {
    /// Row with the lowest energy per SOP.
    pub fn best(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.report.e_sop_j > 0.0)
            .min_by(|a, b| a.report.e_sop_j.total_cmp(&b.report.e_sop_j))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let r = &row.report;
            writeln!(
                out,
                "{},{},{},{:e},{:e},{:e},{:e}",
                row.point.parallelism,
                row.point.mem_type,
                row.point.f_clk_hz,
                r.e_sop_j,
                r.throughput_sops,
                r.area_mm2,
                r.et_efficiency
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Evaluates one point: re-bank the network, run the workload, price it.
pub fn evaluate_point(
    point: SweepPoint,
    workload: &SweepWorkload,
    coeffs: &EnergyCoefficients,
) -> Result<EnergyReport, String> {
    let params = workload
        .network
        .params()
        .with_parallelism(point.parallelism)
        .map_err(|e| e.to_string())?;
    let network = workload.network.reparameterized(params).map_err(|e| e.to_string())?;
    let geometry = mem_geometry(
        params.n_neurons(),
        point.parallelism,
        workload.bank_bits,
        point.mem_type,
    )
    .map_err(|e| e.to_string())?;
    let timing = TimingConfig {
        event_overhead_cycles: workload.overhead_cycles,
        f_clk_hz: point.f_clk_hz,
        ..TimingConfig::thor()
    };
    let mut processor = Processor::new(&network, geometry, timing).map_err(|e| e.to_string())?;
    let trace = run(&mut processor, workload.events.iter().copied()).map_err(|e| e.to_string())?;
    estimate_run(&trace, &geometry, coeffs, point.f_clk_hz).map_err(|e| e.to_string())
}

/// Cartesian sweep over parallelism, memory type and clock. Points run in
/// parallel; invalid points are logged and listed in `skipped`.
pub fn dse_sweep(
    p_values: &[usize],
    mem_types: &[MemType],
    f_values: &[f64],
    workload: &SweepWorkload,
    coeffs: &EnergyCoefficients,
) -> SweepTable {
    let mut points: Vec<SweepPoint> = p_values
        .iter()
        .flat_map(|&p| {
            mem_types.iter().flat_map(move |&t| {
                f_values.iter().map(move |&f| SweepPoint {
                    parallelism: p,
                    mem_type: t,
                    f_clk_hz: f,
                })
            })
        })
        .collect();
    points.sort_by(SweepPoint::key_cmp);
    points.dedup_by(|a, b| a.key_cmp(b) == Ordering::Equal);

    let results: Vec<_> = points
        .par_iter()
        .map(|&point| (point, evaluate_point(point, workload, coeffs)))
        .collect();

    let mut table = SweepTable::default();
    for (point, result) in results {
        match result {
            Ok(report) => table.rows.push(SweepRow { point, report }),
            Err(reason) => {
                log::warn!(
                    "skipping sweep point P={} {} {} Hz: {reason}",
                    point.parallelism,
                    point.mem_type,
                    point.f_clk_hz
                );
                table.skipped.push((point, reason));
            }
        }
    }
    table
}
