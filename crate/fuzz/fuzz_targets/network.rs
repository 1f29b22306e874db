#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::io::{network_to_string, parse_network};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = parse_network(text) {
        let canonical = network_to_string(&config);
        let again = parse_network(&canonical).expect("canonical form parses");
        assert_eq!(again, config);
        assert_eq!(network_to_string(&again), canonical);
    }
});
