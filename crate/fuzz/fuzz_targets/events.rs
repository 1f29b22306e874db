#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::io::{events_to_string, parse_events};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(events) = parse_events(text, None) {
        assert_eq!(parse_events(&events_to_string(&events), None).unwrap(), events);
    }
    let _ = parse_events(text, Some(256));
});
