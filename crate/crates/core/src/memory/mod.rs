//! Neuron and synapse memories with per-access accounting.

mod geometry;
mod ledger;
mod neuron_bank;
mod synapse;

use thiserror::Error;

pub use geometry::{
    mem_geometry, GeometryError, MemGeometry, MemType, UnknownMemType, SRAM_MACRO_WORD_BITS, WEIGHT_BITS,
};
pub use ledger::{AccessLedger, Counters, NeuronCounters, SchedulerCounters};
pub use neuron_bank::{NeuronBank, NeuronMemory, NeuronSlot, WritePhase};
pub use synapse::{SynapseMemory, SynapseWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MemoryError {
    #[error("{what} address {value} out of range (limit {limit})")]
    AddressOutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("word width mismatch: expected {expected} elements, got {actual}")]
    WordWidth { expected: usize, actual: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
