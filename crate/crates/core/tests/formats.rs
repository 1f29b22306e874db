use std::path::PathBuf;

use proptest::prelude::*;

use thorsim::io::{
    events_to_string, load_events, load_network, load_sweep, network_to_string, neuron_image_to_string, parse_events,
    parse_network, parse_neuron_image, parse_spike_log, parse_sweep, parse_synapse_image, parse_trace_csv,
    spike_log_to_string, sweep_to_string, synapse_image_to_string, trace_to_csv, NetworkConfig, TraceSummary,
};
use thorsim::memory::MemType;
use thorsim::pipeline::{run, TimingConfig};
use thorsim::workload::{random_events, random_network};
use thorsim::{EnergyCoefficients, LifParams};

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

#[test]
fn shipped_configs_are_canonical() {
    for name in ["default-network.txt", "tiny-network.txt"] {
        let text = std::fs::read_to_string(config_path(name)).unwrap();
        let config = load_network(&config_path(name)).unwrap();
        assert_eq!(network_to_string(&config), text, "{name}");
    }
    let default = load_network(&config_path("default-network.txt")).unwrap();
    assert_eq!(
        (default.network.n_neurons(), default.network.params().parallelism()),
        (256, 32)
    );
    let events = load_events(&config_path("sample-events.txt"), Some(256)).unwrap();
    assert!(!events.is_empty());
    let sweep = load_sweep(&config_path("parallelism-sweep.txt")).unwrap();
    assert_eq!(sweep.point_count(), 24);
    assert_eq!(parse_sweep(&sweep_to_string(&sweep)).unwrap(), sweep);
    let toml = std::fs::read_to_string(config_path("qualitative-default.toml")).unwrap();
    assert_eq!(
        EnergyCoefficients::from_toml_str(&toml).unwrap(),
        EnergyCoefficients::qualitative_default()
    );
}

#[test]
fn crlf_input_parses_like_lf() {
    let text = std::fs::read_to_string(config_path("tiny-network.txt")).unwrap();
    let crlf = text.replace('\n', "\r\n");
    assert_eq!(parse_network(&crlf).unwrap(), parse_network(&text).unwrap());
    let events = "NEUR 1\r\nSYN 2 3\r\nLEAK\r\n";
    assert_eq!(
        parse_events(events, Some(8)).unwrap(),
        parse_events(&events.replace("\r\n", "\n"), Some(8)).unwrap()
    );
}

#[test]
fn run_outputs_round_trip() {
    let network = random_network(LifParams::new(32, 4, true).unwrap(), 5);
    let config = NetworkConfig::new(network, 1024, MemType::Scm, TimingConfig::thor()).unwrap();
    let mut core = config.processor().unwrap();
    let trace = run(&mut core, random_events(32, 300, 6)).unwrap();

    let parsed = parse_trace_csv(&trace_to_csv(&trace)).unwrap();
    assert_eq!(parsed.summary, TraceSummary::of(&trace));
    assert_eq!(parsed.records, trace.events);
    assert_eq!(
        parse_spike_log(&spike_log_to_string(&trace.output_spikes)).unwrap(),
        trace.output_spikes
    );

    let (geometry, weights) = parse_synapse_image(&synapse_image_to_string(core.synapse_memory())).unwrap();
    assert_eq!(&geometry, core.geometry());
    assert_eq!(weights, core.network().weights());
    let image = parse_neuron_image(&neuron_image_to_string(core.neuron_memory())).unwrap();
    assert_eq!((image.n, image.p), (32, 4));
    assert_eq!(image.states, core.network().neurons());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn network_files_round_trip(shape in 0usize..4, learning: bool, seed: u64) {
        let (n, p) = [(8, 2), (16, 4), (32, 8), (64, 16)][shape];
        let network = random_network(LifParams::new(n, p, learning).unwrap(), seed);
        let config = NetworkConfig::new(network, 4 * n * n, MemType::Scm, TimingConfig::thor()).unwrap();
        let text = network_to_string(&config);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &config);
        prop_assert_eq!(network_to_string(&back), text);
    }

    #[test]
    fn event_files_round_trip(n in 1usize..512, count in 0usize..200, seed: u64) {
        let events = random_events(n, count, seed);
        prop_assert_eq!(parse_events(&events_to_string(&events), Some(n)).unwrap(), events);
    }
}
