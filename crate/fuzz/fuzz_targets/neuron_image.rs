#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::io::parse_neuron_image;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(image) = parse_neuron_image(text) {
        assert_eq!(image.states.len(), image.n);
    }
});
