//! Address-event records shared by the reference model and the executive.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("neuron id {id} out of range for a {n_neurons}-neuron network")]
pub struct EventError {
    pub id: usize,
    pub n_neurons: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AerEvent {
    /// Broadcast one SOP from `src` to every neuron.
    Neuron { src: usize },
    /// A single SOP on the synapse `pre -> post`.
    Synapse { pre: usize, post: usize },
    /// One leak step on every neuron.
    Leak,
}

impl AerEvent {
    pub fn kind(&self) -> EventKind {
        match self {
            AerEvent::Neuron { .. } => EventKind::Neuron,
            AerEvent::Synapse { .. } => EventKind::Synapse,
            AerEvent::Leak => EventKind::Leak,
        }
    }

    pub fn validate(&self, n_neurons: usize) -> Result<(), EventError> {
        let check = |id: usize| {
            if id < n_neurons {
                Ok(())
            } else {
                Err(EventError { id, n_neurons })
            }
        };
        match *self {
            AerEvent::Neuron { src } => check(src),
            AerEvent::Synapse { pre, post } => check(pre).and(check(post)),
            AerEvent::Leak => Ok(()),
        }
    }
}

impl fmt::Display for AerEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AerEvent::Neuron { src } => write!(f, "NEUR {src}"),
            AerEvent::Synapse { pre, post } => write!(f, "SYN {pre} {post}"),
            AerEvent::Leak => f.write_str("LEAK"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Neuron,
    Synapse,
    Leak,
}

impl EventKind {
    pub fn tag(self) -> &'static str {
        match self {
            EventKind::Neuron => "NEUR",
            EventKind::Synapse => "SYN",
            EventKind::Leak => "LEAK",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A spike leaving the chip, tagged with the ordinal of the event that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OutputSpike {
    pub neuron: usize,
    pub event_index: u64,
}
