use serde::Serialize;

use super::{EnergyCoefficients, EnergyError};
use crate::memory::{MemGeometry, MemType, WEIGHT_BITS};
use crate::neuron::NEURON_STATE_BYTES;

/// Per-access costs of one memory macro at a given clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccessEnergy {
    pub read_j: f64,
    pub write_j: f64,
    /// Static energy of the whole macro over one clock cycle.
    pub leakage_j_per_cycle: f64,
}

fn positive(what: &'static str, value: f64) -> Result<f64, EnergyError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(EnergyError::NonPositive { what, value })
    }
}

pub fn memory_access_energy(
    size_bits: usize,
    word_bits: usize,
    mem_type: MemType,
    f_clk_hz: f64,
    coeffs: &EnergyCoefficients,
) -> Result<AccessEnergy, EnergyError> {
    positive("clock frequency", f_clk_hz)?;
    if word_bits == 0 || size_bits < word_bits {
        return Err(EnergyError::InvalidMacro { size_bits, word_bits });
    }
    let size = size_bits as f64;
    let word = word_bits as f64;
    let (read_j, write_j) = match mem_type {
        MemType::Sram => {
            let c = &coeffs.sram;
            (
                c.read_a_j * size.sqrt() * word + c.read_b_j,
                c.write_a_j * size.sqrt() * word + c.write_b_j,
            )
        }
        MemType::Scm => {
            let c = &coeffs.scm;
            let levels = (size / word).log2();
            (
                c.read_c_j * word + c.read_d_j * levels,
                c.write_c_j * word + c.write_d_j * levels,
            )
        }
    };
    Ok(AccessEnergy {
        read_j,
        write_j,
        leakage_j_per_cycle: coeffs.leakage_w_per_bit(mem_type) * size / f_clk_hz,
    })
}

/// Read energy plus one cycle of leakage: the cost of a macro that is read
/// every cycle.
pub fn per_access_energy(
    size_bits: usize,
    word_bits: usize,
    mem_type: MemType,
    f_clk_hz: f64,
    coeffs: &EnergyCoefficients,
) -> Result<f64, EnergyError> {
    let e = memory_access_energy(size_bits, word_bits, mem_type, f_clk_hz, coeffs)?;
    Ok(e.read_j + e.leakage_j_per_cycle)
}

/// Smallest macro size, in bits, at which SRAM becomes at least as cheap per
/// access as SCM. Bisects over power-of-two sizes in `[lo_bits, hi_bits]`;
/// SCM must win at `lo_bits` and SRAM at `hi_bits`.
pub fn sram_scm_crossover(
    word_bits: usize,
    f_clk_hz: f64,
    coeffs: &EnergyCoefficients,
    lo_bits: usize,
    hi_bits: usize,
) -> Result<usize, EnergyError> {
    let scm_margin = |size: usize| -> Result<f64, EnergyError> {
        Ok(per_access_energy(size, word_bits, MemType::Sram, f_clk_hz, coeffs)?
            - per_access_energy(size, word_bits, MemType::Scm, f_clk_hz, coeffs)?)
    };
    let (mut lo, mut hi) = (lo_bits.next_power_of_two().trailing_zeros(), hi_bits.ilog2());
    if lo >= hi || scm_margin(1 << lo)? <= 0.0 || scm_margin(1 << hi)? > 0.0 {
        return Err(EnergyError::NoCrossover { lo_bits, hi_bits });
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if scm_margin(1 << mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(1 << hi)
}

/// Energy per SOP from cycle count, cycle time, average power and SOP count.
pub fn e_sop(n_cycles: f64, t_cycle_s: f64, p_avg_w: f64, n_sops: f64) -> Result<f64, EnergyError> {
    positive("cycle count", n_cycles)?;
    positive("cycle time", t_cycle_s)?;
    positive("average power", p_avg_w)?;
    positive("SOP count", n_sops)?;
    Ok(n_cycles * t_cycle_s * p_avg_w / n_sops)
}

/// Energy-throughput figure of merit in SOP²/(mm²·J·s).
pub fn et_efficiency(throughput_sops: f64, e_sop_j: f64, area_mm2: f64) -> Result<f64, EnergyError> {
    positive("throughput", throughput_sops)?;
    positive("energy per SOP", e_sop_j)?;
    positive("area", area_mm2)?;
    Ok(throughput_sops / (e_sop_j * area_mm2))
}

/// Bits of neuron state: seven bytes per neuron.
pub fn neuron_memory_bits(n_neurons: usize) -> usize {
    8 * NEURON_STATE_BYTES * n_neurons
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AreaBreakdown {
    pub synapse_memory_mm2: f64,
    pub neuron_memory_mm2: f64,
    pub logic_mm2: f64,
    pub fixed_mm2: f64,
}

impl AreaBreakdown {
    pub fn total_mm2(&self) -> f64 {
        self.synapse_memory_mm2 + self.neuron_memory_mm2 + self.logic_mm2 + self.fixed_mm2
    }
}

/// Neuron memory is always standard cells; the synapse memory follows the
/// geometry's memory type.
pub fn area_breakdown(geometry: &MemGeometry, coeffs: &EnergyCoefficients) -> AreaBreakdown {
    AreaBreakdown {
        synapse_memory_mm2: (WEIGHT_BITS * geometry.n * geometry.n) as f64 * coeffs.area_mm2_per_bit(geometry.mem_type),
        neuron_memory_mm2: neuron_memory_bits(geometry.n) as f64 * coeffs.scm.area_mm2_per_bit,
        logic_mm2: geometry.p as f64 * coeffs.logic.area_mm2_per_unit,
        fixed_mm2: coeffs.logic.fixed_area_mm2,
    }
}

pub fn area_model(geometry: &MemGeometry, coeffs: &EnergyCoefficients) -> f64 {
    area_breakdown(geometry, coeffs).total_mm2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::mem_geometry;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn e_sop_identities() {
        assert_eq!(e_sop(1.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        let e = e_sop(9.0, 2.5e-9, 16.32e-3, 256.0).unwrap();
        assert!(close(e, 1.40e-12, 0.03), "{e}");
        assert!(close(e_sop(9.0, 2.5e-9, 16.32e-3, 512.0).unwrap(), e / 2.0, 1e-12));
        for bad in [0.0, -1.0, f64::NAN] {
            assert!(e_sop(bad, 1.0, 1.0, 1.0).is_err());
            assert!(e_sop(1.0, 1.0, 1.0, bad).is_err());
        }
    }

    #[test]
    fn et_rejects_non_positive() {
        assert!(et_efficiency(0.0, 1.0, 1.0).is_err());
        assert!(et_efficiency(1.0, -1.0, 1.0).is_err());
        assert!(et_efficiency(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn wider_scm_word_is_cheaper_per_bit() {
        let c = EnergyCoefficients::qualitative_default();
        for size in [1 << 12, 1 << 14, 1 << 16] {
            let e32 = memory_access_energy(size, 32, MemType::Scm, 1e8, &c).unwrap().read_j / 32.0;
            let e64 = memory_access_energy(size, 64, MemType::Scm, 1e8, &c).unwrap().read_j / 64.0;
            assert!(e64 < e32, "size {size}");
        }
    }

    #[test]
    fn leakage_scales_inversely_with_clock() {
        let c = EnergyCoefficients::qualitative_default();
        for t in MemType::ALL {
            let slow = memory_access_energy(1 << 14, 32, t, 100e6, &c).unwrap();
            let fast = memory_access_energy(1 << 14, 32, t, 400e6, &c).unwrap();
            assert!(close(slow.leakage_j_per_cycle, 4.0 * fast.leakage_j_per_cycle, 1e-12));
            assert_eq!(slow.read_j, fast.read_j);
        }
    }

    #[test]
    fn invalid_macro_rejected() {
        let c = EnergyCoefficients::qualitative_default();
        assert!(memory_access_energy(16, 32, MemType::Scm, 1e8, &c).is_err());
        assert!(memory_access_energy(64, 0, MemType::Sram, 1e8, &c).is_err());
        assert!(memory_access_energy(64, 32, MemType::Sram, 0.0, &c).is_err());
    }

    #[test]
    fn crossover_brackets() {
        let c = EnergyCoefficients::qualitative_default();
        let x = sram_scm_crossover(32, 100e6, &c, 1 << 6, 1 << 24).unwrap();
        assert!(
            per_access_energy(x / 2, 32, MemType::Scm, 100e6, &c).unwrap()
                < per_access_energy(x / 2, 32, MemType::Sram, 100e6, &c).unwrap()
        );
        assert!(
            per_access_energy(x, 32, MemType::Sram, 100e6, &c).unwrap()
                <= per_access_energy(x, 32, MemType::Scm, 100e6, &c).unwrap()
        );
        assert!(sram_scm_crossover(32, 100e6, &c, 1 << 20, 1 << 24).is_err());
    }

    #[test]
    fn default_area_is_calibrated() {
        let c = EnergyCoefficients::qualitative_default();
        let g = mem_geometry(256, 32, 32768, MemType::Scm).unwrap();
        let a = area_breakdown(&g, &c);
        assert!(close(a.total_mm2(), 0.77, 0.005), "{}", a.total_mm2());
        assert!(a.synapse_memory_mm2 > a.neuron_memory_mm2 + a.logic_mm2 + a.fixed_mm2);
    }

    #[test]
    fn zero_coefficients_zero_area() {
        let c = EnergyCoefficients::qualitative_default().with_area_scaled(0.0);
        let g = mem_geometry(64, 8, 1024, MemType::Sram).unwrap();
        assert_eq!(area_model(&g, &c), 0.0);
    }

    proptest! {
        #[test]
        fn et_is_unit_consistent(
            sops_per_event in 1.0f64..1e4,
            f in 1e6f64..1e9,
            cycles in 1.0f64..1e3,
            e in 1e-13f64..1e-10,
            area in 0.01f64..10.0,
        ) {
            // seconds vs nanoseconds: throughput per ns and energy per SOP
            // unchanged gives ET scaled by exactly 1e-9.
            let thr_s = sops_per_event * f / cycles;
            let thr_ns = sops_per_event * (f * 1e-9) / cycles;
            let et_s = et_efficiency(thr_s, e, area).unwrap();
            let et_ns = et_efficiency(thr_ns, e, area).unwrap();
            prop_assert!(close(et_ns * 1e9, et_s, 1e-12));
        }

        #[test]
        fn et_linear_in_throughput(thr in 1.0f64..1e12, k in 0.01f64..100.0) {
            let a = et_efficiency(thr, 1e-12, 0.5).unwrap();
            let b = et_efficiency(thr * k, 1e-12, 0.5).unwrap();
            prop_assert!(close(b, a * k, 1e-12));
        }

        #[test]
        fn area_linear_in_coefficients(k in 0.0f64..10.0, p_exp in 0u32..6) {
            let c = EnergyCoefficients::qualitative_default();
            let g = mem_geometry(256, 1 << p_exp, 32768, MemType::Scm).unwrap();
            let base = area_model(&g, &c);
            prop_assert!(close(area_model(&g, &c.with_area_scaled(k)), base * k, 1e-12));
        }
    }
}
