//! Fixed-point LIF neuron dynamics and the spike-driven plasticity rule.
//!
//! Every function here is a pure transformation over value types. The
//! pipelined executive and the scalar reference both call into this module,
//! so any divergence between them comes from scheduling and memory handling,
//! never from the arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Membrane potential a neuron returns to after firing.
pub const RESET_POTENTIAL: u8 = 0;

/// Largest value a 4-bit synaptic weight can hold.
pub const MAX_WEIGHT: u8 = 15;

/// Serialized size of one neuron record.
pub const NEURON_STATE_BYTES: usize = 7;

/// Byte index of the membrane potential.
pub const BYTE_V_MEM: usize = 0;
/// Byte index of the leak amount.
pub const BYTE_LEAK: usize = 1;
/// Byte index of the firing threshold.
pub const BYTE_V_THRESH: usize = 2;
/// Byte index of the plasticity membrane threshold.
pub const BYTE_CA_THETA_MEM: usize = 3;
/// Byte index of the calcium level, the only writable calcium byte.
pub const BYTE_CA_LEVEL: usize = 4;
/// Byte index of the lower calcium bound.
pub const BYTE_CA_THETA_LO: usize = 5;
/// Byte index of the upper calcium bound.
pub const BYTE_CA_THETA_HI: usize = 6;

/// Bytes that event processing may write when learning is off.
pub const WRITABLE_BYTES_INFERENCE: &[usize] = &[BYTE_V_MEM];
/// Bytes that event processing may write when learning is on.
pub const WRITABLE_BYTES_LEARNING: &[usize] = &[BYTE_V_MEM, BYTE_CA_LEVEL];
/// Bytes forming the calcium block.
pub const CALCIUM_BYTES: std::ops::RangeInclusive<usize> = BYTE_CA_THETA_MEM..=BYTE_CA_THETA_HI;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("calcium update requested while online learning is disabled")]
    LearningDisabled,
    #[error("synaptic weight {0} exceeds the 4-bit range")]
    WeightOutOfRange(u8),
    #[error("neuron count {0} must be a power of two")]
    NeuronsNotPowerOfTwo(usize),
    #[error("parallelism {0} must be a power of two")]
    ParallelismNotPowerOfTwo(usize),
    #[error("parallelism {parallelism} must be at most half the neuron count {neurons}")]
    ParallelismTooLarge { neurons: usize, parallelism: usize },
    #[error("parallelism {0} exceeds the 64-lane datapath limit")]
    ParallelismTooWide(usize),
}

/// Per-neuron state record, one byte per field.
///
/// Byte layout: 0 `v_mem`, 1 `leak`, 2 `v_thresh`, 3 `ca_theta_mem`,
/// 4 `ca_level`, 5 `ca_theta_lo`, 6 `ca_theta_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct NeuronState {
    pub v_mem: u8,
    pub leak: u8,
    pub v_thresh: u8,
    pub ca_theta_mem: u8,
    pub ca_level: u8,
    pub ca_theta_lo: u8,
    pub ca_theta_hi: u8,
}

impl NeuronState {
    pub fn to_bytes(self) -> [u8; NEURON_STATE_BYTES] {
        [
            self.v_mem,
            self.leak,
            self.v_thresh,
            self.ca_theta_mem,
            self.ca_level,
            self.ca_theta_lo,
            self.ca_theta_hi,
        ]
    }

    pub fn from_bytes(bytes: [u8; NEURON_STATE_BYTES]) -> Self {
        Self {
            v_mem: bytes[BYTE_V_MEM],
            leak: bytes[BYTE_LEAK],
            v_thresh: bytes[BYTE_V_THRESH],
            ca_theta_mem: bytes[BYTE_CA_THETA_MEM],
            ca_level: bytes[BYTE_CA_LEVEL],
            ca_theta_lo: bytes[BYTE_CA_THETA_LO],
            ca_theta_hi: bytes[BYTE_CA_THETA_HI],
        }
    }

    pub fn byte(&self, index: usize) -> u8 {
        self.to_bytes()[index]
    }

    pub fn with_byte(self, index: usize, value: u8) -> Self {
        let mut bytes = self.to_bytes();
        bytes[index] = value;
        Self::from_bytes(bytes)
    }
}

/// A 4-bit unsigned synaptic weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SynapseWeight(u8);

impl SynapseWeight {
    pub const ZERO: Self = Self(0);
    pub const MAX: Self = Self(MAX_WEIGHT);

    pub fn new(value: u8) -> Result<Self, CoreError> {
        if value > MAX_WEIGHT {
            return Err(CoreError::WeightOutOfRange(value));
        }
        Ok(Self(value))
    }

    /// Keeps the low nibble; used when unpacking memory words.
    pub fn from_nibble(value: u8) -> Self {
        Self(value & 0x0f)
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Network-wide dimensions shared by every layer of the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LifParams {
    n_neurons: usize,
    parallelism: usize,
    online_learning: bool,
}

impl LifParams {
    pub const MAX_PARALLELISM: usize = 64;

    pub fn new(n_neurons: usize, parallelism: usize, online_learning: bool) -> Result<Self, CoreError> {
        if !n_neurons.is_power_of_two() {
            return Err(CoreError::NeuronsNotPowerOfTwo(n_neurons));
        }
        if !parallelism.is_power_of_two() {
            return Err(CoreError::ParallelismNotPowerOfTwo(parallelism));
        }
        if parallelism > Self::MAX_PARALLELISM {
            return Err(CoreError::ParallelismTooWide(parallelism));
        }
        if n_neurons < 2 * parallelism {
            return Err(CoreError::ParallelismTooLarge {
                neurons: n_neurons,
                parallelism,
            });
        }
        Ok(Self {
            n_neurons,
            parallelism,
            online_learning,
        })
    }

    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    pub fn parallelism(&self) -> usize {
        self.parallelism
    }

    pub fn online_learning(&self) -> bool {
        self.online_learning
    }

    /// Number of P-wide neuron groups, N/P.
    pub fn groups(&self) -> usize {
        self.n_neurons / self.parallelism
    }

    pub fn with_parallelism(self, parallelism: usize) -> Result<Self, CoreError> {
        Self::new(self.n_neurons, parallelism, self.online_learning)
    }

    pub fn with_learning(self, online_learning: bool) -> Self {
        Self {
            online_learning,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SopResult {
    pub new_state: NeuronState,
    pub spiked: bool,
}

/// One synaptic operation: saturating integrate, then fire-and-reset.
pub fn lif_integrate(state: NeuronState, weight: SynapseWeight) -> SopResult {
    let v = state.v_mem.saturating_add(weight.get());
    let spiked = v >= state.v_thresh;
    SopResult {
        new_state: NeuronState {
            v_mem: if spiked { RESET_POTENTIAL } else { v },
            ..state
        },
        spiked,
    }
}

/// Applies one leak step. Calcium decays by one per leak when learning is on.
pub fn lif_leak(state: NeuronState, online_learning: bool) -> NeuronState {
    NeuronState {
        v_mem: state.v_mem.saturating_sub(state.leak),
        ca_level: if online_learning {
            state.ca_level.saturating_sub(1)
        } else {
            state.ca_level
        },
        ..state
    }
}

pub fn calcium_update(state: NeuronState, post_spiked: bool, online_learning: bool) -> Result<NeuronState, CoreError> {
    if !online_learning {
        return Err(CoreError::LearningDisabled);
    }
    if !post_spiked {
        return Ok(state);
    }
    Ok(NeuronState {
        ca_level: state.ca_level.saturating_add(1),
        ..state
    })
}

/// SDSP weight update driven by a pre-synaptic spike.
///
/// `post` is the post-synaptic state as read from memory, before the SOP
/// carried by the same spike is integrated.
pub fn sdsp_update(weight: SynapseWeight, post: &NeuronState) -> SynapseWeight {
    let in_window = post.ca_theta_lo <= post.ca_level && post.ca_level < post.ca_theta_hi;
    if !in_window {
        return weight;
    }
    if post.v_mem >= post.ca_theta_mem {
        SynapseWeight(weight.0.saturating_add(1).min(MAX_WEIGHT))
    } else {
        SynapseWeight(weight.0.saturating_sub(1))
    }
}

/// Full per-neuron update for a spike arriving on one synapse.
///
/// Returns the new neuron state, the new weight and whether the neuron fired.
pub(crate) fn synaptic_update(
    state: NeuronState,
    weight: SynapseWeight,
    online_learning: bool,
) -> (NeuronState, SynapseWeight, bool) {
    let new_weight = if online_learning {
        sdsp_update(weight, &state)
    } else {
        weight
    };
    let SopResult { new_state, spiked } = lif_integrate(state, weight);
    let new_state = if online_learning && spiked {
        NeuronState {
            ca_level: new_state.ca_level.saturating_add(1),
            ..new_state
        }
    } else {
        new_state
    };
    (new_state, new_weight, spiked)
}
