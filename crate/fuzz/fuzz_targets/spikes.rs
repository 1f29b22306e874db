#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::io::{parse_spike_log, spike_log_to_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spikes) = parse_spike_log(text) {
        assert_eq!(parse_spike_log(&spike_log_to_string(&spikes)).unwrap(), spikes);
    }
});
