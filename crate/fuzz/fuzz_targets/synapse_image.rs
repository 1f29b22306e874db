#![no_main]

use libfuzzer_sys::fuzz_target;
use thorsim::io::{parse_synapse_image, synapse_image_to_string};
use thorsim::memory::SynapseMemory;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((geometry, weights)) = parse_synapse_image(text) {
        assert_eq!(weights.len(), geometry.n * geometry.n);
        let mut memory = SynapseMemory::new(geometry);
        memory.load(&weights).expect("parsed image fits its geometry");
        let (g2, w2) = parse_synapse_image(&synapse_image_to_string(&memory)).unwrap();
        assert_eq!((g2, w2), (geometry, weights));
    }
});
