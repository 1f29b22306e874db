use serde::{Deserialize, Serialize};

use super::ledger::{Counters, NeuronCounters};
use super::MemoryError;
use crate::neuron::{NeuronState, BYTE_CA_LEVEL, BYTE_V_MEM, CALCIUM_BYTES, NEURON_STATE_BYTES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WritePhase {
    /// Configuration: every byte is writable.
    Init,
    /// Event processing: only the membrane byte, plus the calcium level when
    /// learning is on, reach the array.
    Inference,
}

/// Physical location of a neuron in the two-bank memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronSlot {
    pub bank: usize,
    pub entry: usize,
    pub lane: usize,
}

/// One bank: seven byte-wide sub-banks, each N/2P entries of P bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronBank {
    bank_id: usize,
    /// `sub_banks[b][entry * P + lane]` is byte `b` of that neuron.
    sub_banks: [Vec<u8>; NEURON_STATE_BYTES],
}

impl NeuronBank {
    fn new(bank_id: usize, entries: usize, p: usize) -> Self {
        Self {
            bank_id,
            sub_banks: std::array::from_fn(|_| vec![0; entries * p]),
        }
    }

    pub fn bank_id(&self) -> usize {
        self.bank_id
    }

    pub fn sub_bank(&self, byte: usize) -> &[u8] {
        &self.sub_banks[byte]
    }
}

/// Dual-bank neuron memory. Group `g = id / P` lives in bank `g % 2`, entry
/// `g / 2`, and lane `id % P` within the entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronMemory {
    n: usize,
    p: usize,
    online_learning: bool,
    banks: [NeuronBank; 2],
    counters: NeuronCounters,
}

impl NeuronMemory {
    pub fn new(n: usize, p: usize, online_learning: bool) -> Self {
        let entries = n / (2 * p);
        Self {
            n,
            p,
            online_learning,
            banks: [NeuronBank::new(0, entries, p), NeuronBank::new(1, entries, p)],
            counters: Default::default(),
        }
    }

    pub fn entries(&self) -> usize {
        self.n / (2 * self.p)
    }

    pub fn parallelism(&self) -> usize {
        self.p
    }

    pub fn n_neurons(&self) -> usize {
        self.n
    }

    pub fn online_learning(&self) -> bool {
        self.online_learning
    }

    pub fn bank(&self, bank_id: usize) -> &NeuronBank {
        &self.banks[bank_id]
    }

    pub fn slot(&self, id: usize) -> NeuronSlot {
        let group = id / self.p;
        NeuronSlot {
            bank: group % 2,
            entry: group / 2,
            lane: id % self.p,
        }
    }

    pub fn neuron_id(&self, slot: NeuronSlot) -> usize {
        (slot.entry * 2 + slot.bank) * self.p + slot.lane
    }

    /// Sub-banks that take part in reads.
    fn read_mask(&self) -> [bool; NEURON_STATE_BYTES] {
        std::array::from_fn(|b| self.online_learning || !CALCIUM_BYTES.contains(&b))
    }

    fn write_mask(&self, phase: WritePhase) -> [bool; NEURON_STATE_BYTES] {
        std::array::from_fn(|b| match phase {
            WritePhase::Init => true,
            WritePhase::Inference => b == BYTE_V_MEM || (self.online_learning && b == BYTE_CA_LEVEL),
        })
    }

    fn check(&self, bank_id: usize, entry: usize) -> Result<(), MemoryError> {
        if bank_id > 1 {
            return Err(MemoryError::AddressOutOfRange {
                what: "neuron bank",
                value: bank_id,
                limit: 2,
            });
        }
        if entry >= self.entries() {
            return Err(MemoryError::AddressOutOfRange {
                what: "neuron entry",
                value: entry,
                limit: self.entries(),
            });
        }
        Ok(())
    }

    /// Reads the P neuron records of one entry. Calcium sub-banks are not
    /// accessed when learning is off and read back as zero.
    pub fn neuron_read(&mut self, bank_id: usize, entry: usize) -> Result<Vec<NeuronState>, MemoryError> {
        self.check(bank_id, entry)?;
        let mask = self.read_mask();
        let bank = &self.banks[bank_id];
        let base = entry * self.p;
        let states = (0..self.p)
            .map(|lane| {
                let bytes = std::array::from_fn(|b| if mask[b] { bank.sub_banks[b][base + lane] } else { 0 });
                NeuronState::from_bytes(bytes)
            })
            .collect();
        for (b, &on) in mask.iter().enumerate() {
            if on {
                self.counters[bank_id][b].reads += 1;
            }
        }
        Ok(states)
    }

    /// Writes one entry. In the inference phase, bytes outside the writable
    /// set are dropped and counted as gated.
    pub fn neuron_write(
        &mut self,
        bank_id: usize,
        entry: usize,
        states: &[NeuronState],
        phase: WritePhase,
    ) -> Result<(), MemoryError> {
        self.check(bank_id, entry)?;
        if states.len() != self.p {
            return Err(MemoryError::WordWidth {
                expected: self.p,
                actual: states.len(),
            });
        }
        let mask = self.write_mask(phase);
        let base = entry * self.p;
        let bank = &mut self.banks[bank_id];
        for (b, &on) in mask.iter().enumerate() {
            if on {
                for (lane, state) in states.iter().enumerate() {
                    bank.sub_banks[b][base + lane] = state.byte(b);
                }
                self.counters[bank_id][b].writes += 1;
            } else {
                self.counters[bank_id][b].gated_cycles += 1;
            }
        }
        Ok(())
    }

    /// Loads all N records through the init port.
    pub fn load(&mut self, states: &[NeuronState]) -> Result<(), MemoryError> {
        if states.len() != self.n {
            return Err(MemoryError::WordWidth {
                expected: self.n,
                actual: states.len(),
            });
        }
        for group in 0..self.n / self.p {
            let chunk = &states[group * self.p..(group + 1) * self.p];
            self.neuron_write(group % 2, group / 2, chunk, WritePhase::Init)?;
        }
        Ok(())
    }

    /// Uncounted readout of every record, in neuron-id order.
    pub fn dump(&self) -> Vec<NeuronState> {
        (0..self.n)
            .map(|id| {
                let slot = self.slot(id);
                let bank = &self.banks[slot.bank];
                let idx = slot.entry * self.p + slot.lane;
                NeuronState::from_bytes(std::array::from_fn(|b| bank.sub_banks[b][idx]))
            })
            .collect()
    }

    /// Raw sub-bank contents, used by the image writer.
    pub fn sub_bank(&self, bank_id: usize, byte: usize) -> &[u8] {
        self.banks[bank_id].sub_bank(byte)
    }

    pub fn counters(&self) -> &NeuronCounters {
        &self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = Default::default();
    }

    /// Charges idle cycles for an interval of `cycles` cycles, given the
    /// counter snapshot taken at its start.
    pub fn charge_idle(&mut self, cycles: u64, before: &NeuronCounters) {
        for (now_bank, then_bank) in self.counters.iter_mut().zip(before) {
            for (now, then) in now_bank.iter_mut().zip(then_bank) {
                let delta: Counters = *now - *then;
                now.idle_cycles += cycles.saturating_sub(delta.active_cycles());
            }
        }
    }
}
