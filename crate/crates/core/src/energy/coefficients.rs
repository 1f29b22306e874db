use serde::{Deserialize, Serialize};

use super::EnergyError;
use crate::memory::MemType;

/// SRAM macro: dynamic energy `a * sqrt(size_bits) * word_bits + b` per access.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SramCoefficients {
    pub read_a_j: f64,
    pub read_b_j: f64,
    pub write_a_j: f64,
    pub write_b_j: f64,
    pub leakage_w_per_bit: f64,
    pub area_mm2_per_bit: f64,
}

/// Standard-cell memory: dynamic energy `c * word_bits + d * log2(entries)`
/// per access.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScmCoefficients {
    pub read_c_j: f64,
    pub read_d_j: f64,
    pub write_c_j: f64,
    pub write_d_j: f64,
    pub leakage_w_per_bit: f64,
    pub area_mm2_per_bit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicCoefficients {
    /// Neuron plus synapse logic, per SOP.
    pub sop_j: f64,
    /// Per parallel neuron/synapse unit.
    pub leakage_w_per_unit: f64,
    pub area_mm2_per_unit: f64,
    /// Controller, schedulers, AER and configuration ports.
    pub fixed_area_mm2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulerCoefficients {
    pub push_j: f64,
    pub decode_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyCoefficients {
    pub name: String,
    pub sram: SramCoefficients,
    pub scm: ScmCoefficients,
    pub logic: LogicCoefficients,
    pub scheduler: SchedulerCoefficients,
    pub controller_event_j: f64,
    /// Fraction of a read charged for each idle, non-gated memory cycle.
    pub idle_factor: f64,
}

impl EnergyCoefficients {
    pub const QUALITATIVE_DEFAULT_NAME: &'static str = "qualitative-default";

    /// Shipped set. Tuned so that the relative orderings come out right
    /// (per-access SRAM/SCM crossover, synapse memory dominating a neuron
    /// event, the E_SOP optimum of the parallelism sweep). Absolute values
    /// are not meaningful, except the area terms, which sum to 0.77 mm² for
    /// a 256-neuron, 32-wide SCM core.
    pub fn qualitative_default() -> Self {
        Self {
            name: Self::QUALITATIVE_DEFAULT_NAME.to_string(),
            sram: SramCoefficients {
                read_a_j: 6e-16,
                read_b_j: 4.0e-12,
                write_a_j: 7e-16,
                write_b_j: 4.5e-12,
                leakage_w_per_bit: 5e-10,
                area_mm2_per_bit: 0.6e-6,
            },
            scm: ScmCoefficients {
                read_c_j: 0.006e-12,
                read_d_j: 0.1e-12,
                write_c_j: 0.008e-12,
                write_d_j: 0.1e-12,
                leakage_w_per_bit: 1.5e-8,
                area_mm2_per_bit: 2.5e-6,
            },
            logic: LogicCoefficients {
                sop_j: 0.35e-12,
                leakage_w_per_unit: 3e-5,
                area_mm2_per_unit: 0.0015,
                fixed_area_mm2: 0.0308,
            },
            scheduler: SchedulerCoefficients {
                push_j: 0.5e-12,
                decode_j: 0.5e-12,
            },
            controller_event_j: 8e-12,
            idle_factor: 0.02,
        }
    }

    /// Every coefficient with a name, for validation and scaling.
    pub fn named_values(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("sram.read_a_j", self.sram.read_a_j),
            ("sram.read_b_j", self.sram.read_b_j),
            ("sram.write_a_j", self.sram.write_a_j),
            ("sram.write_b_j", self.sram.write_b_j),
            ("sram.leakage_w_per_bit", self.sram.leakage_w_per_bit),
            ("sram.area_mm2_per_bit", self.sram.area_mm2_per_bit),
            ("scm.read_c_j", self.scm.read_c_j),
            ("scm.read_d_j", self.scm.read_d_j),
            ("scm.write_c_j", self.scm.write_c_j),
            ("scm.write_d_j", self.scm.write_d_j),
            ("scm.leakage_w_per_bit", self.scm.leakage_w_per_bit),
            ("scm.area_mm2_per_bit", self.scm.area_mm2_per_bit),
            ("logic.sop_j", self.logic.sop_j),
            ("logic.leakage_w_per_unit", self.logic.leakage_w_per_unit),
            ("logic.area_mm2_per_unit", self.logic.area_mm2_per_unit),
            ("logic.fixed_area_mm2", self.logic.fixed_area_mm2),
            ("scheduler.push_j", self.scheduler.push_j),
            ("scheduler.decode_j", self.scheduler.decode_j),
            ("controller_event_j", self.controller_event_j),
            ("idle_factor", self.idle_factor),
        ]
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        for (name, value) in self.named_values() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(EnergyError::InvalidCoefficient { name, value });
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, EnergyError> {
        let coeffs: Self = toml::from_str(text).map_err(|e| EnergyError::Parse(e.to_string()))?;
        coeffs.validate()?;
        Ok(coeffs)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("coefficients always serialize")
    }

    pub fn leakage_w_per_bit(&self, mem_type: MemType) -> f64 {
        match mem_type {
            MemType::Sram => self.sram.leakage_w_per_bit,
            MemType::Scm => self.scm.leakage_w_per_bit,
        }
    }

    pub fn area_mm2_per_bit(&self, mem_type: MemType) -> f64 {
        match mem_type {
            MemType::Sram => self.sram.area_mm2_per_bit,
            MemType::Scm => self.scm.area_mm2_per_bit,
        }
    }

    /// Copy with every leakage coefficient multiplied by `k`.
    pub fn with_leakage_scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.sram.leakage_w_per_bit *= k;
        out.scm.leakage_w_per_bit *= k;
        out.logic.leakage_w_per_unit *= k;
        out
    }

    /// Copy with every area coefficient multiplied by `k`.
    pub fn with_area_scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.sram.area_mm2_per_bit *= k;
        out.scm.area_mm2_per_bit *= k;
        out.logic.area_mm2_per_unit *= k;
        out.logic.fixed_area_mm2 *= k;
        out
    }
}

impl Default for EnergyCoefficients {
    fn default() -> Self {
        Self::qualitative_default()
    }
}
