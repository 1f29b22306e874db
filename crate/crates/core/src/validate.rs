//! Differential check of the cycle-accurate executive against the scalar
//! reference.

use std::fmt;

use crate::error::{Error, SimError};
use crate::event::{AerEvent, OutputSpike};
use crate::io::NetworkConfig;
use crate::neuron::NEURON_STATE_BYTES;
use crate::pipeline::{run, TimingMode};
use crate::reference::{reference_run, Network, RunLimits};

const BYTE_NAMES: [&str; NEURON_STATE_BYTES] = [
    "v_mem",
    "leak",
    "v_thresh",
    "ca_theta_mem",
    "ca_level",
    "ca_theta_lo",
    "ca_theta_hi",
];

/// First point at which the two models disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divergence {
    /// One side faulted, or both faulted differently.
    Outcome { pipeline: String, reference: String },
    Spike {
        index: usize,
        pipeline: Option<OutputSpike>,
        reference: Option<OutputSpike>,
    },
    Neuron {
        id: usize,
        byte: usize,
        pipeline: u8,
        reference: u8,
    },
    Weight {
        pre: usize,
        post: usize,
        pipeline: u8,
        reference: u8,
    },
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spike = |s: &Option<OutputSpike>| match s {
            Some(s) => format!("SPIKE {} {}", s.neuron, s.event_index),
            None => "nothing".to_string(),
        };
        match self {
            Divergence::Outcome { pipeline, reference } => {
                write!(f, "run outcome differs: pipeline `{pipeline}`, reference `{reference}`")
            }
            Divergence::Spike {
                index,
                pipeline,
                reference,
            } => write!(
                f,
                "output spike #{index} differs: pipeline {}, reference {}",
                spike(pipeline),
                spike(reference)
            ),
            Divergence::Neuron {
                id,
                byte,
                pipeline,
                reference,
            } => write!(
                f,
                "neuron {id} byte {byte} ({}) differs: pipeline {pipeline}, reference {reference}",
                BYTE_NAMES[*byte]
            ),
            Divergence::Weight {
                pre,
                post,
                pipeline,
                reference,
            } => write!(
                f,
                "weight {pre} -> {post} differs: pipeline {pipeline}, reference {reference}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub events_executed: u64,
    pub output_spikes: usize,
    /// Set when both models stopped on the same fault.
    pub fault: Option<SimError>,
    pub divergence: Option<Divergence>,
}

impl Validation {
    pub fn is_exact(&self) -> bool {
        self.divergence.is_none()
    }
}

/// First differing spike, neuron byte or weight between two end states.
pub fn first_divergence(
    pipeline: (&Network, &[OutputSpike]),
    reference: (&Network, &[OutputSpike]),
) -> Option<Divergence> {
    let (p_net, p_spikes) = pipeline;
    let (r_net, r_spikes) = reference;
    for index in 0..p_spikes.len().max(r_spikes.len()) {
        let (a, b) = (p_spikes.get(index).copied(), r_spikes.get(index).copied());
        if a != b {
            return Some(Divergence::Spike {
                index,
                pipeline: a,
                reference: b,
            });
        }
    }
    for (id, (a, b)) in p_net.neurons().iter().zip(r_net.neurons()).enumerate() {
        for byte in 0..NEURON_STATE_BYTES {
            if a.byte(byte) != b.byte(byte) {
                return Some(Divergence::Neuron {
                    id,
                    byte,
                    pipeline: a.byte(byte),
                    reference: b.byte(byte),
                });
            }
        }
    }
    let n = p_net.n_neurons();
    for (i, (a, b)) in p_net.weights().iter().zip(r_net.weights()).enumerate() {
        if a != b {
            return Some(Divergence::Weight {
                pre: i / n,
                post: i % n,
                pipeline: a.get(),
                reference: b.get(),
            });
        }
    }
    None
}

/// Runs `events` on the parallel pipeline and on the scalar reference, with
/// the reference's input queue bounded like the hardware FIFO. When
/// `inject_fault` names a synapse, its stored weight is corrupted in the
/// pipeline after the run, to exercise the harness.
pub fn validate_against_reference(
    config: &NetworkConfig,
    events: &[AerEvent],
    inject_fault: Option<(usize, usize)>,
) -> Result<Validation, Error> {
    let mut config = config.clone();
    config.timing.mode = TimingMode::Thor;
    let mut processor = config.processor()?;
    let pipeline = run(&mut processor, events.iter().copied());
    if let Some((pre, post)) = inject_fault {
        processor.inject_weight_fault(pre, post);
    }

    let mut oracle = config.network.clone();
    let limits = RunLimits::for_params(&oracle.params());
    let reference = reference_run(&mut oracle, events.iter().copied(), limits);

    let (trace, expected) = match (pipeline, reference) {
        (Ok(t), Ok(r)) => (t, r),
        (Err(a), Err(b)) if a == b => {
            let divergence = inject_fault.map(|(pre, post)| Divergence::Weight {
                pre,
                post,
                pipeline: processor.network().weight(pre, post).get(),
                reference: processor.network().weight(pre, post).get() ^ 1,
            });
            return Ok(Validation {
                events_executed: 0,
                output_spikes: 0,
                fault: Some(a),
                divergence,
            });
        }
        (a, b) => {
            let show = |r: Result<String, SimError>| r.unwrap_or_else(|e| format!("fault: {e}"));
            return Ok(Validation {
                events_executed: 0,
                output_spikes: 0,
                fault: None,
                divergence: Some(Divergence::Outcome {
                    pipeline: show(a.map(|t| format!("completed {} events", t.events_executed()))),
                    reference: show(b.map(|r| format!("completed {} events", r.events_executed))),
                }),
            });
        }
    };

    let divergence = first_divergence(
        (&processor.network(), &trace.output_spikes),
        (&oracle, &expected.output_spikes),
    );
    Ok(Validation {
        events_executed: trace.events_executed(),
        output_spikes: trace.output_spikes.len(),
        fault: None,
        divergence,
    })
}
