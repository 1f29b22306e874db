//! Coefficient-driven energy, area and throughput models.

mod coefficients;
mod model;
mod report;
mod sweep;

use thiserror::Error;

pub use coefficients::{
    EnergyCoefficients, LogicCoefficients, SchedulerCoefficients, ScmCoefficients, SramCoefficients,
};
pub use model::{
    area_breakdown, area_model, e_sop, et_efficiency, memory_access_energy, neuron_memory_bits, per_access_energy,
    sram_scm_crossover, AccessEnergy, AreaBreakdown,
};
pub use report::{estimate_run, ComponentEnergy, EnergyBreakdown, EnergyReport};
pub use sweep::{dse_sweep, evaluate_point, SweepPoint, SweepRow, SweepTable, SweepWorkload, SWEEP_CSV_HEADER};

use crate::pipeline::TimingMode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("coefficient {name} must be finite and non-negative, got {value}")]
    InvalidCoefficient { name: &'static str, value: f64 },
    #[error("invalid memory macro: {size_bits} bits with {word_bits}-bit words")]
    InvalidMacro { size_bits: usize, word_bits: usize },
    #[error("no SRAM/SCM crossover between {lo_bits} and {hi_bits} bits")]
    NoCrossover { lo_bits: usize, hi_bits: usize },
    #[error("trace is for N={trace_n}, P={trace_p} but geometry is N={geometry_n}, P={geometry_p}")]
    GeometryMismatch {
        trace_n: usize,
        trace_p: usize,
        geometry_n: usize,
        geometry_p: usize,
    },
    #[error("energy estimation needs a parallel-pipeline trace, got a {0} trace")]
    UnsupportedMode(TimingMode),
    #[error("coefficient file: {0}")]
    Parse(String),
}
