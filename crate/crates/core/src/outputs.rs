//! The three files written for a simulation run.

use std::path::Path;

use serde::Serialize;

use crate::energy::{
    area_breakdown, area_model, estimate_run, memory_access_energy, AccessEnergy, AreaBreakdown, EnergyCoefficients,
    EnergyReport,
};
use crate::error::Error;
use crate::event::AerEvent;
use crate::io::{spike_log_to_string, trace_to_csv, write_text, NetworkConfig};
use crate::memory::{MemGeometry, MemType};
use crate::pipeline::{baseline_neuron_event_cycles, neuron_event_cycles, simulate, RunTrace, TimingMode};
use crate::reference::Network;

pub const TRACE_FILE: &str = "trace.csv";
pub const SPIKES_FILE: &str = "spikes.txt";
pub const ENERGY_FILE: &str = "energy.json";

#[derive(Debug, Serialize)]
struct EnergyFile<'a> {
    mode: TimingMode,
    coefficients: &'a str,
    estimate: Option<&'a EnergyReport>,
    note: Option<&'static str>,
}

#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub trace: RunTrace,
    pub final_network: Network,
    /// Absent for baseline-timing runs.
    pub energy: Option<EnergyReport>,
    pub trace_csv: String,
    pub spike_log: String,
    pub energy_json: String,
}

impl RunOutputs {
    pub fn write_to(&self, dir: &Path) -> Result<(), Error> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        write_text(&dir.join(TRACE_FILE), &self.trace_csv)?;
        write_text(&dir.join(SPIKES_FILE), &self.spike_log)?;
        write_text(&dir.join(ENERGY_FILE), &self.energy_json)
    }
}

/// Simulates `events` in the configuration's timing mode and renders the
/// trace, spike log and energy report.
pub fn execute_config(
    config: &NetworkConfig,
    events: &[AerEvent],
    coeffs: &EnergyCoefficients,
) -> Result<RunOutputs, Error> {
    let geometry = config.geometry()?;
    let mut processor = config.processor()?;
    let trace = simulate(&mut processor, events.iter().copied())?;
    let energy = match trace.mode {
        TimingMode::Thor => Some(estimate_run(&trace, &geometry, coeffs, config.timing.f_clk_hz)?),
        TimingMode::Baseline => None,
    };
    let file = EnergyFile {
        mode: trace.mode,
        coefficients: &coeffs.name,
        estimate: energy.as_ref(),
        note: energy
            .is_none()
            .then_some("energy is only modelled for the parallel pipeline"),
    };
    let mut energy_json = serde_json::to_string_pretty(&file).expect("report serializes");
    energy_json.push('\n');
    Ok(RunOutputs {
        trace_csv: trace_to_csv(&trace),
        spike_log: spike_log_to_string(&trace.output_spikes),
        final_network: processor.network(),
        trace,
        energy,
        energy_json,
    })
}

/// Static figures for a configuration: memory organisation, area, per-access
/// energies and the peak neuron-event throughput.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub geometry: MemGeometry,
    pub online_learning: bool,
    pub mode: TimingMode,
    pub f_clk_hz: f64,
    pub synapse_memory_bits: usize,
    pub neuron_memory_bytes: usize,
    pub synapse_macro_bits: usize,
    pub synapse_macro: AccessEnergy,
    pub neuron_sub_bank: AccessEnergy,
    pub area: AreaBreakdown,
    pub area_mm2: f64,
    pub neuron_event_cycles: u64,
    pub peak_throughput_sops: f64,
}

pub fn design_report(config: &NetworkConfig, coeffs: &EnergyCoefficients) -> Result<DesignReport, Error> {
    let geometry = config.geometry()?;
    let params = config.network.params();
    let f = config.timing.f_clk_hz;
    let core_cycles = match config.timing.mode {
        TimingMode::Thor => neuron_event_cycles(&params),
        TimingMode::Baseline => baseline_neuron_event_cycles(&params),
    };
    let event_cycles = core_cycles + config.timing.event_overhead_cycles;
    Ok(DesignReport {
        online_learning: params.online_learning(),
        mode: config.timing.mode,
        f_clk_hz: f,
        synapse_memory_bits: geometry.total_synapse_bits(),
        neuron_memory_bytes: geometry.neuron_memory_bytes(),
        synapse_macro_bits: geometry.physical_bank_bits(),
        synapse_macro: memory_access_energy(
            geometry.physical_bank_bits(),
            geometry.physical_word_bits(),
            geometry.mem_type,
            f,
            coeffs,
        )?,
        neuron_sub_bank: memory_access_energy(
            geometry.neuron_sub_bank_bits(),
            8 * geometry.p,
            MemType::Scm,
            f,
            coeffs,
        )?,
        area: area_breakdown(&geometry, coeffs),
        area_mm2: area_model(&geometry, coeffs),
        neuron_event_cycles: event_cycles,
        peak_throughput_sops: params.n_neurons() as f64 * f / event_cycles as f64,
        geometry,
    })
}
