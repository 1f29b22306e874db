//! Cycle-accurate, bit-exact simulator of a parallel-update digital
//! neuromorphic core, with an analytical energy, area and throughput model.
//!
//! The core holds N leaky integrate-and-fire neurons with all-to-all 4-bit
//! synapses and optional spike-driven plasticity. A neuron event broadcasts
//! one spike to every neuron, P neurons per cycle, through two interleaved
//! memory banks.
//!
//! ```
//! use thorsim::workload::saturating_workload;
//! use thorsim::{mem_geometry, run, LifParams, MemType, Processor, TimingConfig};
//!
//! let (network, events) = saturating_workload(LifParams::new(256, 32, false).unwrap(), 1);
//! let geometry = mem_geometry(256, 32, 32768, MemType::Scm).unwrap();
//! let mut core = Processor::new(&network, geometry, TimingConfig::thor()).unwrap();
//! let trace = run(&mut core, events).unwrap();
//! assert_eq!(trace.core_cycles, 9);
//! assert_eq!(trace.sops, 256);
//! ```

pub mod energy;
pub mod error;
pub mod event;
pub mod io;
pub mod memory;
pub mod neuron;
pub mod outputs;
pub mod pipeline;
pub mod reference;
pub mod scheduler;
pub mod validate;
pub mod workload;

pub use energy::{
    area_model, dse_sweep, e_sop, estimate_run, et_efficiency, memory_access_energy, EnergyCoefficients, EnergyReport,
};
pub use error::{Error, SimError};
pub use event::{AerEvent, EventKind, OutputSpike};
pub use io::{FormatError, NetworkConfig};
pub use memory::{mem_geometry, AccessLedger, MemGeometry, MemType};
pub use neuron::{LifParams, NeuronState, SynapseWeight};
pub use pipeline::{baseline_run, run, simulate, EventResult, Processor, RunTrace, TimingConfig, TimingMode};
pub use reference::{reference_run, scalar_reference_step, Network, RunLimits};
pub use scheduler::{SchedulerUnit, SpikeVector};
