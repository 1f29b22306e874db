use std::ops::{AddAssign, Sub};

use serde::{Deserialize, Serialize};

use crate::neuron::NEURON_STATE_BYTES;

/// Access counters for one memory structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counters {
    pub reads: u64,
    pub writes: u64,
    pub idle_cycles: u64,
    /// Cycles in which a write was dropped by the write gate.
    pub gated_cycles: u64,
}

impl Counters {
    /// Cycles in which the structure did something (accessed or gated).
    pub fn active_cycles(&self) -> u64 {
        self.reads + self.writes + self.gated_cycles
    }
}

impl AddAssign for Counters {
    fn add_assign(&mut self, rhs: Self) {
        self.reads += rhs.reads;
        self.writes += rhs.writes;
        self.idle_cycles += rhs.idle_cycles;
        self.gated_cycles += rhs.gated_cycles;
    }
}

impl Sub for Counters {
    type Output = Counters;

    fn sub(self, rhs: Self) -> Counters {
        Counters {
            reads: self.reads - rhs.reads,
            writes: self.writes - rhs.writes,
            idle_cycles: self.idle_cycles - rhs.idle_cycles,
            gated_cycles: self.gated_cycles - rhs.gated_cycles,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SchedulerCounters {
    pub pushes: u64,
    pub decodes: u64,
}

impl AddAssign for SchedulerCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.pushes += rhs.pushes;
        self.decodes += rhs.decodes;
    }
}

impl Sub for SchedulerCounters {
    type Output = SchedulerCounters;

    fn sub(self, rhs: Self) -> Self {
        SchedulerCounters {
            pushes: self.pushes - rhs.pushes,
            decodes: self.decodes - rhs.decodes,
        }
    }
}

pub type NeuronCounters = [[Counters; NEURON_STATE_BYTES]; 2];

/// Per-structure access ledger for a run or a single event.
///
/// Neuron counters are indexed `[bank][sub_bank]`. Synapse reads and writes
/// count physical bank accesses; synapse idle cycles count cycles with no
/// synapse access at all. Scheduler counters are indexed input, output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AccessLedger {
    pub neuron: NeuronCounters,
    pub synapse: Counters,
    pub scheduler: [SchedulerCounters; 2],
    pub controller_events: u64,
}

impl AccessLedger {
    pub fn neuron_total(&self) -> Counters {
        let mut total = Counters::default();
        for bank in &self.neuron {
            for c in bank {
                total += *c;
            }
        }
        total
    }

    pub fn neuron_sub_bank_total(&self, sub_bank: usize) -> Counters {
        let mut total = self.neuron[0][sub_bank];
        total += self.neuron[1][sub_bank];
        total
    }
}

impl AddAssign for AccessLedger {
    fn add_assign(&mut self, rhs: Self) {
        for b in 0..2 {
            for s in 0..NEURON_STATE_BYTES {
                self.neuron[b][s] += rhs.neuron[b][s];
            }
            self.scheduler[b] += rhs.scheduler[b];
        }
        self.synapse += rhs.synapse;
        self.controller_events += rhs.controller_events;
    }
}

impl Sub for AccessLedger {
    type Output = AccessLedger;

    fn sub(self, rhs: Self) -> AccessLedger {
        let mut out = AccessLedger::default();
        for b in 0..2 {
            for s in 0..NEURON_STATE_BYTES {
                out.neuron[b][s] = self.neuron[b][s] - rhs.neuron[b][s];
            }
            out.scheduler[b] = self.scheduler[b] - rhs.scheduler[b];
        }
        out.synapse = self.synapse - rhs.synapse;
        out.controller_events = self.controller_events - rhs.controller_events;
        out
    }
}
