use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::neuron::LifParams;

/// Width of the SRAM macros the synapse memory is tiled from.
pub const SRAM_MACRO_WORD_BITS: usize = 32;

/// Bits per stored synaptic weight.
pub const WEIGHT_BITS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemType {
    Sram,
    Scm,
}

impl MemType {
    pub const ALL: [MemType; 2] = [MemType::Sram, MemType::Scm];

    pub fn as_str(self) -> &'static str {
        match self {
            MemType::Sram => "SRAM",
            MemType::Scm => "SCM",
        }
    }
}

impl fmt::Display for MemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown memory type `{0}` (expected sram or scm)")]
pub struct UnknownMemType(pub String);

impl FromStr for MemType {
    type Err = UnknownMemType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sram" => Ok(MemType::Sram),
            "scm" => Ok(MemType::Scm),
            _ => Err(UnknownMemType(s.to_string())),
        }
    }
}

/// A violated geometry constraint. The message names the constraint.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("constraint `N is a power of two` violated: N = {0}")]
    NeuronsNotPowerOfTwo(usize),
    #[error("constraint `P is a power of two` violated: P = {0}")]
    ParallelismNotPowerOfTwo(usize),
    #[error("constraint `N >= 2P` violated: N = {n}, P = {p}")]
    ParallelismTooLarge { n: usize, p: usize },
    #[error("constraint `P <= 64` violated: P = {0}")]
    ParallelismTooWide(usize),
    #[error("constraint `S divides 4N^2` violated: S = {s}, 4N^2 = {total_bits}")]
    BankSizeNotDivisor { s: usize, total_bits: usize },
    #[error("constraint `S is a multiple of the 4P-bit I/O width` violated: S = {s}, 4P = {io_width}")]
    BankSizeNotWordMultiple { s: usize, io_width: usize },
    #[error("constraint `4P is a multiple of 32 for SRAM` violated: 4P = {io_width}")]
    SramWordAlignment { io_width: usize },
}

/// Derived synapse-memory and neuron-memory dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemGeometry {
    pub n: usize,
    pub p: usize,
    /// Bank size in bits.
    pub s: usize,
    pub mem_type: MemType,
    /// 4N^2 / S.
    pub bank_rows: usize,
    /// 4P/32 for SRAM, 1 for SCM.
    pub banks_per_row: usize,
    /// 4P.
    pub io_width_bits: usize,
}

pub fn mem_geometry(n: usize, p: usize, s: usize, mem_type: MemType) -> Result<MemGeometry, GeometryError> {
    if !n.is_power_of_two() {
        return Err(GeometryError::NeuronsNotPowerOfTwo(n));
    }
    if !p.is_power_of_two() {
        return Err(GeometryError::ParallelismNotPowerOfTwo(p));
    }
    if p > LifParams::MAX_PARALLELISM {
        return Err(GeometryError::ParallelismTooWide(p));
    }
    if n < 2 * p {
        return Err(GeometryError::ParallelismTooLarge { n, p });
    }
    let total_bits = WEIGHT_BITS * n * n;
    if s == 0 || !total_bits.is_multiple_of(s) {
        return Err(GeometryError::BankSizeNotDivisor { s, total_bits });
    }
    let io_width = WEIGHT_BITS * p;
    if !s.is_multiple_of(io_width) {
        return Err(GeometryError::BankSizeNotWordMultiple { s, io_width });
    }
    let banks_per_row = match mem_type {
        MemType::Sram => {
            if !io_width.is_multiple_of(SRAM_MACRO_WORD_BITS) {
                return Err(GeometryError::SramWordAlignment { io_width });
            }
            io_width / SRAM_MACRO_WORD_BITS
        }
        MemType::Scm => 1,
    };
    Ok(MemGeometry {
        n,
        p,
        s,
        mem_type,
        bank_rows: total_bits / s,
        banks_per_row,
        io_width_bits: io_width,
    })
}

impl MemGeometry {
    pub fn total_synapse_bits(&self) -> usize {
        WEIGHT_BITS * self.n * self.n
    }

    /// Width of one physical word: one SRAM macro column or a whole SCM row.
    pub fn physical_word_bits(&self) -> usize {
        match self.mem_type {
            MemType::Sram => SRAM_MACRO_WORD_BITS,
            MemType::Scm => self.io_width_bits,
        }
    }

    /// Size of one physical bank in bits.
    pub fn physical_bank_bits(&self) -> usize {
        self.s / self.banks_per_row
    }

    pub fn physical_words(&self) -> usize {
        self.total_synapse_bits() / self.physical_word_bits()
    }

    /// Logical 4P-bit words per bank row, S / 4P.
    pub fn words_per_bank_row(&self) -> usize {
        self.s / self.io_width_bits
    }

    /// Entries per neuron sub-bank, N / 2P.
    pub fn neuron_sub_bank_entries(&self) -> usize {
        self.n / (2 * self.p)
    }

    /// Bits in one neuron sub-bank: N/2P entries of P bytes.
    pub fn neuron_sub_bank_bits(&self) -> usize {
        self.neuron_sub_bank_entries() * self.p * 8
    }

    /// Logical neuron-memory capacity across both banks, 7N bytes.
    pub fn neuron_memory_bytes(&self) -> usize {
        crate::neuron::NEURON_STATE_BYTES * self.n
    }

    /// Bank row holding the logical word for `(pre, post_group)`.
    pub fn bank_row_of(&self, pre: usize, post_group: usize) -> usize {
        let address = pre * (self.n / self.p) + post_group;
        address / self.words_per_bank_row()
    }

    pub fn with_parallelism(&self, p: usize) -> Result<Self, GeometryError> {
        mem_geometry(self.n, p, self.s, self.mem_type)
    }

    pub fn with_mem_type(&self, mem_type: MemType) -> Result<Self, GeometryError> {
        mem_geometry(self.n, self.p, self.s, mem_type)
    }
}
