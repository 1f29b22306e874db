#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::EnergyCoefficients;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(coeffs) = EnergyCoefficients::from_toml_str(text) {
        let again = EnergyCoefficients::from_toml_str(&coeffs.to_toml_string()).expect("serialized set parses");
        assert_eq!(again, coeffs);
    }
});
