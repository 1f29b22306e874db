//! Seeded synthetic networks and event streams.
//!
//! Random networks are kept subcritical: the expected number of recurrent
//! spikes triggered by one neuron event stays well below one, so long
//! streams run without flooding the input scheduler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::event::AerEvent;
use crate::neuron::{LifParams, NeuronState, SynapseWeight};
use crate::reference::Network;

/// Fraction of non-zero weights: about four incoming synapses per neuron,
/// capped at one in eight for tiny networks.
pub fn default_density(n_neurons: usize) -> f64 {
    (4.0 / n_neurons as f64).min(0.125)
}

pub fn random_network(params: LifParams, seed: u64) -> Network {
    let n = params.n_neurons();
    let density = default_density(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut network = Network::new(params);
    for id in 0..n {
        let v_thresh = rng.gen_range(24..=255u8);
        let ca_theta_lo = rng.gen_range(0..4u8);
        network.set_neuron(
            id,
            NeuronState {
                v_mem: rng.gen_range(0..v_thresh / 2),
                leak: rng.gen_range(0..=8),
                v_thresh,
                ca_theta_mem: rng.gen_range(v_thresh / 2..=255),
                ca_level: rng.gen_range(0..8),
                ca_theta_lo,
                ca_theta_hi: ca_theta_lo + rng.gen_range(0..12u8),
            },
        );
    }
    for pre in 0..n {
        for post in 0..n {
            if rng.gen_bool(density) {
                network.set_weight(pre, post, SynapseWeight::from_nibble(rng.gen_range(1..=15)));
            }
        }
    }
    network
}

/// Mix of roughly 60% neuron, 25% synapse and 15% leak events.
pub fn random_events(n_neurons: usize, count: usize, seed: u64) -> Vec<AerEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| match rng.gen_range(0..100) {
            0..=59 => AerEvent::Neuron {
                src: rng.gen_range(0..n_neurons),
            },
            60..=84 => AerEvent::Synapse {
                pre: rng.gen_range(0..n_neurons),
                post: rng.gen_range(0..n_neurons),
            },
            _ => AerEvent::Leak,
        })
        .collect()
}

/// A network that never fires under up to 84 neuron events, and a stream of
/// `count` neuron events cycling through the sources. Weights are small and
/// non-zero on a fixed pattern; thresholds sit at 255; the calcium window
/// is empty so learning never moves a weight.
pub fn saturating_workload(params: LifParams, count: usize) -> (Network, Vec<AerEvent>) {
    let n_neurons = params.n_neurons();
    let mut network = Network::new(params);
    for id in 0..n_neurons {
        network.set_neuron(
            id,
            NeuronState {
                v_thresh: 255,
                ..Default::default()
            },
        );
        for post in 0..n_neurons {
            network.set_weight(id, post, SynapseWeight::from_nibble(((id + post) % 3 + 1) as u8));
        }
    }
    let events = (0..count).map(|i| AerEvent::Neuron { src: i % n_neurons }).collect();
    (network, events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{reference_run, RunLimits};

    #[test]
    fn seeded_generation_is_reproducible() {
        let params = LifParams::new(32, 4, true).unwrap();
        assert_eq!(random_network(params, 7), random_network(params, 7));
        assert_ne!(random_network(params, 7), random_network(params, 8));
        assert_eq!(random_events(32, 100, 3), random_events(32, 100, 3));
    }

    #[test]
    fn events_are_in_range() {
        for e in random_events(16, 1000, 1) {
            e.validate(16).unwrap();
        }
    }

    #[test]
    fn saturating_workload_stays_silent() {
        let (mut network, events) = saturating_workload(LifParams::new(256, 32, true).unwrap(), 84);
        let before = network.weights().to_vec();
        let limits = RunLimits::for_params(&network.params());
        let out = reference_run(&mut network, events, limits).unwrap();
        assert!(out.output_spikes.is_empty());
        assert_eq!(out.sops, 84 * 256);
        assert_eq!(network.weights(), &before[..]);
    }
}
