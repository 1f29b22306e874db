use serde::{Deserialize, Serialize};

use super::model::{area_model, e_sop, et_efficiency, memory_access_energy, neuron_memory_bits};
use super::{EnergyCoefficients, EnergyError};
use crate::memory::{Counters, MemGeometry, MemType};
use crate::pipeline::{RunTrace, TimingMode};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComponentEnergy {
    pub dynamic_j: f64,
    pub leakage_j: f64,
}

impl ComponentEnergy {
    pub fn total_j(&self) -> f64 {
        self.dynamic_j + self.leakage_j
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub neuron_memory: ComponentEnergy,
    pub synapse_memory: ComponentEnergy,
    /// Neuron and synapse update logic.
    pub logic: ComponentEnergy,
    pub schedulers: ComponentEnergy,
    pub controller: ComponentEnergy,
}

impl EnergyBreakdown {
    pub fn components(&self) -> [(&'static str, ComponentEnergy); 5] {
        [
            ("neuron_memory", self.neuron_memory),
            ("synapse_memory", self.synapse_memory),
            ("logic", self.logic),
            ("schedulers", self.schedulers),
            ("controller", self.controller),
        ]
    }

    /// Name of the most expensive component.
    pub fn largest(&self) -> &'static str {
        self.components()
            .into_iter()
            .max_by(|a, b| a.1.total_j().total_cmp(&b.1.total_j()))
            .map(|(name, _)| name)
            .expect("five components")
    }

    pub fn leakage_j(&self) -> f64 {
        self.components().iter().map(|(_, c)| c.leakage_j).sum()
    }

    pub fn dynamic_j(&self) -> f64 {
        self.components().iter().map(|(_, c)| c.dynamic_j).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub coefficients: String,
    pub mem_type: MemType,
    pub parallelism: usize,
    pub f_clk_hz: f64,
    pub total_cycles: u64,
    pub sops: u64,
    pub total_j: f64,
    pub breakdown: EnergyBreakdown,
    pub leakage_j: f64,
    pub e_sop_j: f64,
    pub throughput_sops: f64,
    pub area_mm2: f64,
    pub et_efficiency: f64,
}

fn memory_energy(
    counters: &Counters,
    size_bits: usize,
    word_bits: usize,
    mem_type: MemType,
    idle_banks: u64,
    f_clk_hz: f64,
    coeffs: &EnergyCoefficients,
) -> Result<f64, EnergyError> {
    let e = memory_access_energy(size_bits, word_bits, mem_type, f_clk_hz, coeffs)?;
    Ok(counters.reads as f64 * e.read_j
        + counters.writes as f64 * e.write_j
        + (counters.idle_cycles * idle_banks) as f64 * coeffs.idle_factor * e.read_j)
}

/// Prices a parallel-pipeline trace. Leakage is charged for every cycle of
/// the trace on all structures; gated cycles cost nothing.
pub fn estimate_run(
    trace: &RunTrace,
    geometry: &MemGeometry,
    coeffs: &EnergyCoefficients,
    f_clk_hz: f64,
) -> Result<EnergyReport, EnergyError> {
    if trace.mode != TimingMode::Thor {
        return Err(EnergyError::UnsupportedMode(trace.mode));
    }
    if trace.n_neurons != geometry.n || trace.parallelism != geometry.p {
        return Err(EnergyError::GeometryMismatch {
            trace_n: trace.n_neurons,
            trace_p: trace.parallelism,
            geometry_n: geometry.n,
            geometry_p: geometry.p,
        });
    }
    if !(f_clk_hz.is_finite() && f_clk_hz > 0.0) {
        return Err(EnergyError::NonPositive {
            what: "clock frequency",
            value: f_clk_hz,
        });
    }
    coeffs.validate()?;

    let cycles = trace.total_cycles as f64;
    let ledger = &trace.ledger;
    let sub_bank_bits = geometry.neuron_sub_bank_bits();
    let mut neuron_dynamic = 0.0;
    for bank in &ledger.neuron {
        for counters in bank {
            neuron_dynamic += memory_energy(
                counters,
                sub_bank_bits,
                8 * geometry.p,
                MemType::Scm,
                1,
                f_clk_hz,
                coeffs,
            )?;
        }
    }
    let synapse_dynamic = memory_energy(
        &ledger.synapse,
        geometry.physical_bank_bits(),
        geometry.physical_word_bits(),
        geometry.mem_type,
        geometry.banks_per_row as u64,
        f_clk_hz,
        coeffs,
    )?;

    let leak = |watts: f64| cycles * watts / f_clk_hz;
    let breakdown = EnergyBreakdown {
        neuron_memory: ComponentEnergy {
            dynamic_j: neuron_dynamic,
            leakage_j: leak(coeffs.scm.leakage_w_per_bit * neuron_memory_bits(geometry.n) as f64),
        },
        synapse_memory: ComponentEnergy {
            dynamic_j: synapse_dynamic,
            leakage_j: leak(coeffs.leakage_w_per_bit(geometry.mem_type) * geometry.total_synapse_bits() as f64),
        },
        logic: ComponentEnergy {
            dynamic_j: trace.sops as f64 * coeffs.logic.sop_j,
            leakage_j: leak(coeffs.logic.leakage_w_per_unit * geometry.p as f64),
        },
        schedulers: ComponentEnergy {
            dynamic_j: ledger
                .scheduler
                .iter()
                .map(|s| s.pushes as f64 * coeffs.scheduler.push_j + s.decodes as f64 * coeffs.scheduler.decode_j)
                .sum(),
            leakage_j: 0.0,
        },
        controller: ComponentEnergy {
            dynamic_j: ledger.controller_events as f64 * coeffs.controller_event_j,
            leakage_j: 0.0,
        },
    };
    let total_j: f64 = breakdown.components().iter().map(|(_, c)| c.total_j()).sum();
    let area_mm2 = area_model(geometry, coeffs);

    let (e_sop_j, throughput_sops, et) = if trace.sops > 0 && total_j > 0.0 {
        let t_cycle = 1.0 / f_clk_hz;
        let p_avg = total_j / (cycles * t_cycle);
        let e = e_sop(cycles, t_cycle, p_avg, trace.sops as f64)?;
        let throughput = trace.sops as f64 * f_clk_hz / cycles;
        let et = if area_mm2 > 0.0 {
            et_efficiency(throughput, e, area_mm2)?
        } else {
            0.0
        };
        (e, throughput, et)
    } else {
        (0.0, 0.0, 0.0)
    };

    Ok(EnergyReport {
        coefficients: coeffs.name.clone(),
        mem_type: geometry.mem_type,
        parallelism: geometry.p,
        f_clk_hz,
        total_cycles: trace.total_cycles,
        sops: trace.sops,
        total_j,
        leakage_j: breakdown.leakage_j(),
        breakdown,
        e_sop_j,
        throughput_sops,
        area_mm2,
        et_efficiency: et,
    })
}
