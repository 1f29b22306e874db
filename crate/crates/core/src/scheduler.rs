//! Spike scheduler units.
//!
//! Two identical units run side by side: the input unit turns queued spike
//! vectors back into neuron events for the controller, the output unit
//! streams them off chip. Each holds a FIFO of P-bit spike vectors and a
//! status register tracking which spikes of the head vector remain.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::memory::SchedulerCounters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchedulerRole {
    /// Decoded spikes feed the controller as recurrent neuron events.
    Input,
    /// Decoded spikes feed the AER output.
    Output,
}

impl SchedulerRole {
    pub fn index(self) -> usize {
        match self {
            SchedulerRole::Input => 0,
            SchedulerRole::Output => 1,
        }
    }
}

impl fmt::Display for SchedulerRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchedulerRole::Input => "input",
            SchedulerRole::Output => "output",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchedulerError {
    #[error("{role} scheduler FIFO overflow (capacity {capacity})")]
    Overflow { role: SchedulerRole, capacity: usize },
    #[error("malformed spike vector: offset {offset}, bits {bits:#x}, parallelism {p}")]
    InvalidVector { offset: usize, bits: u64, p: usize },
}

/// P spike flags for one neuron group plus the group's base neuron id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpikeVector {
    pub bits: u64,
    pub offset: usize,
}

impl SpikeVector {
    pub fn new(bits: u64, offset: usize) -> Self {
        Self { bits, offset }
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Neuron ids flagged in this vector, ascending.
    pub fn spikes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(|i| self.bits >> i & 1 == 1).map(|i| self.offset + i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FsmState {
    /// FIFO empty.
    Idle,
    /// Head loaded, waiting for a trigger.
    HoldHead,
    /// Emitted a spike last cycle and still has work queued.
    Decode,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FsmInputs {
    pub new_vector: Option<SpikeVector>,
    pub trigger: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FsmOutputs {
    pub spike_id: Option<usize>,
    pub fifo_pop: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulerUnit {
    role: SchedulerRole,
    p: usize,
    capacity: usize,
    fifo: VecDeque<SpikeVector>,
    status: u64,
    state: FsmState,
    counters: SchedulerCounters,
}

impl SchedulerUnit {
    /// A unit for an N-neuron, P-wide core: FIFO depth N/P.
    pub fn new(role: SchedulerRole, n_neurons: usize, p: usize) -> Self {
        Self {
            role,
            p,
            capacity: n_neurons / p,
            fifo: VecDeque::with_capacity(n_neurons / p),
            status: 0,
            state: FsmState::Idle,
            counters: SchedulerCounters::default(),
        }
    }

    pub fn role(&self) -> SchedulerRole {
        self.role
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.fifo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fifo.is_empty()
    }

    pub fn status(&self) -> u64 {
        self.status
    }

    pub fn state(&self) -> FsmState {
        self.state
    }

    pub fn head(&self) -> Option<&SpikeVector> {
        self.fifo.front()
    }

    pub fn counters(&self) -> SchedulerCounters {
        self.counters
    }

    /// Enqueues a vector. Zero vectors are dropped; returns whether the
    /// vector was enqueued.
    pub fn push_spike_vector(&mut self, vector: SpikeVector) -> Result<bool, SchedulerError> {
        let lane_mask = if self.p >= 64 { u64::MAX } else { (1u64 << self.p) - 1 };
        if !vector.offset.is_multiple_of(self.p) || vector.bits & !lane_mask != 0 {
            return Err(SchedulerError::InvalidVector {
                offset: vector.offset,
                bits: vector.bits,
                p: self.p,
            });
        }
        if vector.is_empty() {
            return Ok(false);
        }
        if self.fifo.len() >= self.capacity {
            return Err(SchedulerError::Overflow {
                role: self.role,
                capacity: self.capacity,
            });
        }
        if self.fifo.is_empty() {
            self.status = vector.bits;
        }
        self.fifo.push_back(vector);
        self.counters.pushes += 1;
        Ok(true)
    }

    fn decode(&mut self, trigger: bool) -> FsmOutputs {
        let Some(head) = self.fifo.front() else {
            return FsmOutputs::default();
        };
        if !trigger {
            return FsmOutputs::default();
        }
        let lane = self.status.trailing_zeros() as usize;
        let spike = head.offset + lane;
        self.status &= self.status - 1;
        self.counters.decodes += 1;
        let mut fifo_pop = false;
        if self.status == 0 {
            self.fifo.pop_front();
            self.status = self.fifo.front().map_or(0, |v| v.bits);
            fifo_pop = true;
        }
        FsmOutputs {
            spike_id: Some(spike),
            fifo_pop,
        }
    }

    fn settle(&mut self, decoded: bool) {
        self.state = if self.fifo.is_empty() {
            FsmState::Idle
        } else if decoded {
            FsmState::Decode
        } else {
            FsmState::HoldHead
        };
    }

    /// Emits the lowest pending spike of the head vector when triggered.
    pub fn decode_next(&mut self, trigger: bool) -> Option<usize> {
        let out = self.decode(trigger);
        self.settle(out.spike_id.is_some());
        out.spike_id
    }

    /// One clock cycle. The decode acts on the state at the start of the
    /// cycle; the push lands at the tail afterwards.
    pub fn fsm_step(&mut self, inputs: FsmInputs) -> Result<FsmOutputs, SchedulerError> {
        let out = self.decode(inputs.trigger);
        if let Some(vector) = inputs.new_vector {
            self.push_spike_vector(vector)?;
        }
        self.settle(out.spike_id.is_some());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(n: usize, p: usize) -> SchedulerUnit {
        SchedulerUnit::new(SchedulerRole::Input, n, p)
    }

    #[test]
    fn zero_vector_is_dropped() {
        let mut u = unit(16, 4);
        assert_eq!(u.push_spike_vector(SpikeVector::new(0, 4)), Ok(false));
        assert!(u.is_empty());
        assert_eq!(u.state(), FsmState::Idle);
    }

    #[test]
    fn push_loads_status() {
        let mut u = unit(16, 4);
        u.push_spike_vector(SpikeVector::new(0b100, 0)).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u.status(), 0b100);
    }

    #[test]
    fn overflow_after_capacity() {
        let mut u = unit(16, 4);
        for g in 0..4 {
            u.push_spike_vector(SpikeVector::new(1, g * 4)).unwrap();
        }
        assert_eq!(
            u.push_spike_vector(SpikeVector::new(1, 0)),
            Err(SchedulerError::Overflow {
                role: SchedulerRole::Input,
                capacity: 4
            })
        );
    }

    #[test]
    fn malformed_vectors_rejected() {
        let mut u = unit(16, 4);
        assert!(matches!(
            u.push_spike_vector(SpikeVector::new(1, 3)),
            Err(SchedulerError::InvalidVector { .. })
        ));
        assert!(matches!(
            u.push_spike_vector(SpikeVector::new(0x10, 0)),
            Err(SchedulerError::InvalidVector { .. })
        ));
    }

    #[test]
    fn decode_walks_bits_then_pops() {
        let mut u = unit(64, 32);
        assert_eq!(u.decode_next(true), None);
        u.push_spike_vector(SpikeVector::new(0b0110, 32)).unwrap();
        assert_eq!(u.decode_next(false), None);
        assert_eq!(u.status(), 0b0110);
        assert_eq!(u.decode_next(true), Some(33));
        assert_eq!(u.len(), 1);
        assert_eq!(u.decode_next(true), Some(34));
        assert!(u.is_empty());
        assert_eq!(u.status(), 0);
    }

    #[test]
    fn fsm_table() {
        let mut u = unit(16, 4);
        let out = u
            .fsm_step(FsmInputs {
                new_vector: Some(SpikeVector::new(0b11, 4)),
                trigger: true,
            })
            .unwrap();
        // Sampled at cycle start: nothing to decode yet.
        assert_eq!(out, FsmOutputs::default());
        assert_eq!(u.state(), FsmState::HoldHead);
        assert_eq!(u.status(), 0b11);

        let out = u
            .fsm_step(FsmInputs {
                new_vector: None,
                trigger: true,
            })
            .unwrap();
        assert_eq!(out.spike_id, Some(4));
        assert!(!out.fifo_pop);
        assert_eq!(u.state(), FsmState::Decode);

        let out = u
            .fsm_step(FsmInputs {
                new_vector: None,
                trigger: true,
            })
            .unwrap();
        assert_eq!(out.spike_id, Some(5));
        assert!(out.fifo_pop);
        assert_eq!(u.state(), FsmState::Idle);
    }

    #[test]
    fn push_and_decode_same_cycle_on_full_fifo() {
        let mut u = unit(8, 4);
        u.push_spike_vector(SpikeVector::new(1, 0)).unwrap();
        u.push_spike_vector(SpikeVector::new(1, 4)).unwrap();
        let out = u
            .fsm_step(FsmInputs {
                new_vector: Some(SpikeVector::new(2, 0)),
                trigger: true,
            })
            .unwrap();
        assert_eq!(out.spike_id, Some(0));
        assert!(out.fifo_pop);
        assert_eq!(u.len(), 2);
        assert_eq!(u.status(), 1);
    }

    #[derive(Debug, Clone)]
    enum Step {
        Push(u64, usize),
        Decode(bool),
    }

    fn steps(p: usize, groups: usize) -> impl Strategy<Value = Vec<Step>> {
        let mask = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
        proptest::collection::vec(
            prop_oneof![
                (any::<u64>(), 0..groups).prop_map(move |(b, g)| Step::Push(b & mask, g * p)),
                any::<bool>().prop_map(Step::Decode),
            ],
            0..200,
        )
    }

    proptest! {
        #[test]
        fn invariants_under_random_traffic(ops in steps(4, 8)) {
            let mut u = unit(32, 4);
            for op in ops {
                match op {
                    Step::Push(bits, offset) => {
                        let _ = u.push_spike_vector(SpikeVector::new(bits, offset));
                    }
                    Step::Decode(t) => {
                        u.decode_next(t);
                    }
                }
                prop_assert!(u.len() <= u.capacity());
                match u.head() {
                    None => prop_assert_eq!(u.status(), 0),
                    Some(h) => {
                        prop_assert!(u.status() != 0);
                        prop_assert_eq!(u.status() & !h.bits, 0);
                    }
                }
            }
        }
    }
}
