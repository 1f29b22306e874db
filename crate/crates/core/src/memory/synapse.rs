use super::geometry::MemGeometry;
use super::ledger::Counters;
use super::MemoryError;
use crate::neuron::SynapseWeight;

/// A 4P-bit logical synapse word. Lane `l` occupies bits `4l..4l+3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SynapseWord {
    lanes: Vec<SynapseWeight>,
}

impl SynapseWord {
    pub fn zeroed(lanes: usize) -> Self {
        Self {
            lanes: vec![SynapseWeight::ZERO; lanes],
        }
    }

    pub fn from_weights(weights: &[SynapseWeight]) -> Self {
        Self {
            lanes: weights.to_vec(),
        }
    }

    /// Unpacks little-endian bytes, low nibble first.
    pub fn from_le_bytes(bytes: &[u8], lanes: usize) -> Self {
        Self {
            lanes: (0..lanes)
                .map(|l| SynapseWeight::from_nibble(bytes.get(l / 2).copied().unwrap_or(0) >> (4 * (l % 2))))
                .collect(),
        }
    }

    pub fn lanes(&self) -> usize {
        self.lanes.len()
    }

    pub fn width_bits(&self) -> usize {
        4 * self.lanes.len()
    }

    pub fn get(&self, lane: usize) -> SynapseWeight {
        self.lanes[lane]
    }

    pub fn set(&mut self, lane: usize, weight: SynapseWeight) {
        self.lanes[lane] = weight;
    }

    pub fn weights(&self) -> &[SynapseWeight] {
        &self.lanes
    }

    pub fn bit(&self, index: usize) -> bool {
        (self.lanes[index / 4].get() >> (index % 4)) & 1 == 1
    }

    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.lanes
            .chunks(2)
            .map(|pair| pair[0].get() | pair.get(1).map_or(0, |w| w.get() << 4))
            .collect()
    }
}

/// The N x N crossbar, stored as consecutive 4P-bit words addressed by
/// `pre * (N/P) + post_group`. Bank rows hold S/4P consecutive words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynapseMemory {
    geometry: MemGeometry,
    /// One weight per element, in bit order of the flat 4N^2-bit array.
    weights: Vec<SynapseWeight>,
    counters: Counters,
}

impl SynapseMemory {
    pub fn new(geometry: MemGeometry) -> Self {
        Self {
            geometry,
            weights: vec![SynapseWeight::ZERO; geometry.n * geometry.n],
            counters: Counters::default(),
        }
    }

    pub fn geometry(&self) -> &MemGeometry {
        &self.geometry
    }

    fn word_base(&self, pre: usize, post_group: usize) -> Result<usize, MemoryError> {
        let n = self.geometry.n;
        let groups = n / self.geometry.p;
        if pre >= n {
            return Err(MemoryError::AddressOutOfRange {
                what: "pre-synaptic neuron",
                value: pre,
                limit: n,
            });
        }
        if post_group >= groups {
            return Err(MemoryError::AddressOutOfRange {
                what: "post-synaptic group",
                value: post_group,
                limit: groups,
            });
        }
        Ok(pre * n + post_group * self.geometry.p)
    }

    pub fn synapse_read(&mut self, pre: usize, post_group: usize) -> Result<SynapseWord, MemoryError> {
        let base = self.word_base(pre, post_group)?;
        self.counters.reads += self.geometry.banks_per_row as u64;
        Ok(SynapseWord::from_weights(&self.weights[base..base + self.geometry.p]))
    }

    pub fn synapse_write(&mut self, pre: usize, post_group: usize, word: &SynapseWord) -> Result<(), MemoryError> {
        let base = self.word_base(pre, post_group)?;
        if word.lanes() != self.geometry.p {
            return Err(MemoryError::WordWidth {
                expected: self.geometry.p,
                actual: word.lanes(),
            });
        }
        self.weights[base..base + self.geometry.p].copy_from_slice(word.weights());
        self.counters.writes += self.geometry.banks_per_row as u64;
        Ok(())
    }

    /// Loads the full matrix (row-major by pre) through the init port.
    pub fn load(&mut self, weights: &[SynapseWeight]) -> Result<(), MemoryError> {
        if weights.len() != self.weights.len() {
            return Err(MemoryError::WordWidth {
                expected: self.weights.len(),
                actual: weights.len(),
            });
        }
        self.weights.copy_from_slice(weights);
        Ok(())
    }

    /// Uncounted readout, row-major by pre.
    pub fn dump(&self) -> &[SynapseWeight] {
        &self.weights
    }

    pub(crate) fn dump_mut(&mut self) -> &mut [SynapseWeight] {
        &mut self.weights
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }

    pub fn charge_idle(&mut self, cycles: u64, active_cycles: u64) {
        self.counters.idle_cycles += cycles.saturating_sub(active_cycles);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::geometry::{mem_geometry, MemType};
    use proptest::prelude::*;

    fn w(x: u8) -> SynapseWeight {
        SynapseWeight::new(x).unwrap()
    }

    #[test]
    fn round_trip_and_bank_count() {
        let g = mem_geometry(256, 32, 32768, MemType::Sram).unwrap();
        let mut mem = SynapseMemory::new(g);
        let word = SynapseWord::from_weights(&(0..32).map(|i| w((i % 16) as u8)).collect::<Vec<_>>());
        mem.synapse_write(17, 5, &word).unwrap();
        assert_eq!(mem.counters().writes, 4);
        assert_eq!(mem.synapse_read(17, 5).unwrap(), word);
        assert_eq!(mem.counters().reads, 4);
        assert_eq!(mem.dump()[17 * 256 + 5 * 32 + 3], w(3));
    }

    #[test]
    fn out_of_range_rejected() {
        let g = mem_geometry(16, 4, 64, MemType::Scm).unwrap();
        let mut mem = SynapseMemory::new(g);
        assert!(mem.synapse_read(16, 0).is_err());
        assert!(mem.synapse_read(0, 4).is_err());
        assert!(mem.synapse_write(0, 0, &SynapseWord::zeroed(2)).is_err());
    }

    #[test]
    fn lane_five_occupies_bits_20_to_23() {
        let mut word = SynapseWord::zeroed(8);
        word.set(5, w(0b1011));
        for bit in 0..32 {
            let expected = matches!(bit, 20 | 21 | 23);
            assert_eq!(word.bit(bit), expected, "bit {bit}");
        }
        let bytes = word.to_le_bytes();
        assert_eq!(u32::from_le_bytes(bytes.try_into().unwrap()), 0b1011 << 20);
    }

    /// Packs with plain shifts on a u128, independent of the byte packer.
    fn pack_oracle(weights: &[u8]) -> u128 {
        weights
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &x)| acc | ((x as u128) << (4 * i)))
    }

    proptest! {
        #[test]
        fn packing_matches_oracle(weights in proptest::collection::vec(0u8..16, 1..32)) {
            let word = SynapseWord::from_weights(&weights.iter().map(|&x| w(x)).collect::<Vec<_>>());
            let mut bytes = word.to_le_bytes();
            bytes.resize(16, 0);
            prop_assert_eq!(u128::from_le_bytes(bytes.clone().try_into().unwrap()), pack_oracle(&weights));
            prop_assert_eq!(SynapseWord::from_le_bytes(&bytes, weights.len()), word);
        }
    }
}
