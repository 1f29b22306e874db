#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::io::{parse_sweep, sweep_to_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_sweep(text) {
        if !spec.memory.is_empty() || !spec.parallelism.is_empty() || !spec.clock_hz.is_empty() {
            assert_eq!(parse_sweep(&sweep_to_string(&spec)).unwrap(), spec);
        }
    }
});
