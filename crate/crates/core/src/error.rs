use thiserror::Error;

use crate::event::EventError;
use crate::memory::MemoryError;
use crate::scheduler::SchedulerRole;

/// Faults raised while executing events.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Event(#[from] EventError),
    #[error("{role} scheduler overflow (capacity {capacity} vectors) during event {event_index}")]
    SchedulerOverflow {
        role: SchedulerRole,
        capacity: usize,
        event_index: u64,
    },
    #[error("event budget of {limit} events exhausted")]
    EventBudgetExceeded { limit: u64 },
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error("processor is in {actual} mode but {expected} mode was requested")]
    WrongMode {
        expected: crate::pipeline::TimingMode,
        actual: crate::pipeline::TimingMode,
    },
}

/// Umbrella error for callers that drive several layers at once.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] crate::neuron::CoreError),
    #[error(transparent)]
    Geometry(#[from] crate::memory::GeometryError),
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Energy(#[from] crate::energy::EnergyError),
    #[error(transparent)]
    Format(#[from] crate::io::FormatError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
