use proptest::prelude::*;

use thorsim::io::NetworkConfig;
use thorsim::memory::{mem_geometry, MemType};
use thorsim::pipeline::{baseline_run, run, Processor, TimingConfig};
use thorsim::validate::{validate_against_reference, Divergence};
use thorsim::workload::{random_events, random_network};
use thorsim::{reference_run, AerEvent, LifParams, Network, NeuronState, RunLimits, SimError, SynapseWeight};

const SHAPES: [(usize, usize); 9] = [
    (8, 1),
    (8, 2),
    (8, 4),
    (16, 4),
    (16, 8),
    (32, 2),
    (32, 8),
    (64, 16),
    (256, 32),
];

fn processor(network: &Network, mode: TimingConfig) -> Processor {
    let n = network.n_neurons();
    let p = network.params().parallelism();
    let mem_type = if (4 * p).is_multiple_of(32) {
        MemType::Sram
    } else {
        MemType::Scm
    };
    let geometry = mem_geometry(n, p, (4 * n * n).min(32768), mem_type).unwrap();
    Processor::new(network, geometry, mode).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thor_and_baseline_match_reference(
        shape in 0..SHAPES.len(),
        learning: bool,
        seed: u64,
        count in 1usize..400,
    ) {
        let (n, p) = SHAPES[shape];
        let network = random_network(LifParams::new(n, p, learning).unwrap(), seed);
        let events = random_events(n, count, !seed);

        let mut oracle = network.clone();
        let expected = reference_run(&mut oracle, events.iter().copied(), RunLimits::for_params(&network.params()));

        let mut core = processor(&network, TimingConfig::thor());
        let thor = run(&mut core, events.iter().copied());
        match (&thor, &expected) {
            (Ok(t), Ok(r)) => {
                let mut got = t.output_spikes.clone();
                let mut want = r.output_spikes.clone();
                got.sort();
                want.sort();
                prop_assert_eq!(got, want);
                prop_assert_eq!(core.network(), oracle.clone());
                prop_assert_eq!(t.sops, r.sops);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "outcomes differ: {:?} vs {:?}", thor.as_ref().err(), expected.as_ref().err()),
        }

        let mut base = processor(&network, TimingConfig::baseline());
        let mut unbounded = network.clone();
        let expected = reference_run(&mut unbounded, events.iter().copied(), RunLimits::unbounded()).unwrap();
        let trace = baseline_run(&mut base, events.iter().copied()).unwrap();
        prop_assert_eq!(trace.output_spikes, expected.output_spikes);
        prop_assert_eq!(base.network(), unbounded);
    }
}

fn supercritical(n: usize, p: usize) -> Network {
    let mut network = Network::new(LifParams::new(n, p, false).unwrap());
    for id in 0..n {
        network.set_neuron(
            id,
            NeuronState {
                v_thresh: 1,
                ..Default::default()
            },
        );
        for post in 0..n {
            network.set_weight(id, post, SynapseWeight::from_nibble(15));
        }
    }
    network
}

#[test]
fn runaway_activity_faults_identically() {
    let network = supercritical(16, 4);
    let events = vec![AerEvent::Neuron { src: 0 }; 4];
    let mut core = processor(&network, TimingConfig::thor());
    let err = run(&mut core, events.iter().copied()).unwrap_err();
    assert!(matches!(err, SimError::SchedulerOverflow { .. }), "{err}");

    let config = NetworkConfig::new(network, 1024, MemType::Scm, TimingConfig::thor()).unwrap();
    let v = validate_against_reference(&config, &events, None).unwrap();
    assert_eq!(v.fault, Some(err));
    assert!(v.is_exact());
}

#[test]
fn injected_weight_fault_is_reported() {
    let network = random_network(LifParams::new(32, 8, true).unwrap(), 11);
    let config = NetworkConfig::new(network, 4096, MemType::Scm, TimingConfig::thor()).unwrap();
    let events = random_events(32, 500, 12);
    assert!(validate_against_reference(&config, &events, None).unwrap().is_exact());
    let v = validate_against_reference(&config, &events, Some((3, 17))).unwrap();
    match v.divergence {
        Some(Divergence::Weight { pre: 3, post: 17, .. }) => {}
        other => panic!("unexpected divergence {other:?}"),
    }
}

#[test]
fn neuron_event_sop_count_is_n() {
    for (n, p) in SHAPES {
        let network = random_network(LifParams::new(n, p, false).unwrap(), n as u64);
        let mut core = processor(&network, TimingConfig::thor());
        let result = core.execute_neuron_event(n - 1).unwrap();
        assert_eq!(result.sop_count as usize, n);
        assert_eq!(result.core_cycles as usize, n / p + 1);
    }
}
