//! Scalar reference interpreter.
//!
//! Applies event semantics one neuron at a time, in index order, with no
//! banking and no pipelining. The cycle-accurate executive must reproduce
//! its neuron states, weights and spikes bit for bit.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::event::{AerEvent, OutputSpike};
use crate::neuron::{lif_leak, synaptic_update, CoreError, LifParams, NeuronState, SynapseWeight};
use crate::scheduler::SchedulerRole;

/// Architectural state: N neuron records and the N x N weight crossbar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    params: LifParams,
    neurons: Vec<NeuronState>,
    /// Row-major by pre-synaptic neuron.
    weights: Vec<SynapseWeight>,
}

impl Network {
    pub fn new(params: LifParams) -> Self {
        let n = params.n_neurons();
        Self {
            params,
            neurons: vec![NeuronState::default(); n],
            weights: vec![SynapseWeight::ZERO; n * n],
        }
    }

    pub fn from_parts(
        params: LifParams,
        neurons: Vec<NeuronState>,
        weights: Vec<SynapseWeight>,
    ) -> Result<Self, NetworkShapeError> {
        let n = params.n_neurons();
        if neurons.len() != n {
            return Err(NetworkShapeError::Neurons {
                expected: n,
                actual: neurons.len(),
            });
        }
        if weights.len() != n * n {
            return Err(NetworkShapeError::Weights {
                expected: n * n,
                actual: weights.len(),
            });
        }
        Ok(Self {
            params,
            neurons,
            weights,
        })
    }

    pub fn params(&self) -> LifParams {
        self.params
    }

    pub fn n_neurons(&self) -> usize {
        self.params.n_neurons()
    }

    pub fn neurons(&self) -> &[NeuronState] {
        &self.neurons
    }

    pub fn weights(&self) -> &[SynapseWeight] {
        &self.weights
    }

    pub fn neuron(&self, id: usize) -> NeuronState {
        self.neurons[id]
    }

    pub fn set_neuron(&mut self, id: usize, state: NeuronState) {
        self.neurons[id] = state;
    }

    pub fn weight(&self, pre: usize, post: usize) -> SynapseWeight {
        self.weights[pre * self.n_neurons() + post]
    }

    pub fn set_weight(&mut self, pre: usize, post: usize, weight: SynapseWeight) {
        let n = self.n_neurons();
        self.weights[pre * n + post] = weight;
    }

    /// Same state under a different parallelism or learning setting.
    pub fn reparameterized(&self, params: LifParams) -> Result<Self, NetworkShapeError> {
        Self::from_parts(params, self.neurons.clone(), self.weights.clone())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum NetworkShapeError {
    #[error("expected {expected} neuron records, got {actual}")]
    Neurons { expected: usize, actual: usize },
    #[error("expected {expected} weights, got {actual}")]
    Weights { expected: usize, actual: usize },
    #[error(transparent)]
    Params(#[from] CoreError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepOutcome {
    /// Neurons that fired, ascending.
    pub spikes: Vec<usize>,
    pub sops: u64,
}

pub fn scalar_reference_step(network: &mut Network, event: AerEvent) -> Result<StepOutcome, SimError> {
    let n = network.n_neurons();
    event.validate(n)?;
    let learning = network.params.online_learning();
    let mut outcome = StepOutcome::default();
    match event {
        AerEvent::Neuron { src } => {
            for post in 0..n {
                if apply_sop(network, src, post, learning) {
                    outcome.spikes.push(post);
                }
                outcome.sops += 1;
            }
        }
        AerEvent::Synapse { pre, post } => {
            if apply_sop(network, pre, post, learning) {
                outcome.spikes.push(post);
            }
            outcome.sops = 1;
        }
        AerEvent::Leak => {
            for state in &mut network.neurons {
                *state = lif_leak(*state, learning);
            }
        }
    }
    Ok(outcome)
}

fn apply_sop(network: &mut Network, pre: usize, post: usize, learning: bool) -> bool {
    let (state, weight, spiked) = synaptic_update(network.neuron(post), network.weight(pre, post), learning);
    network.set_neuron(post, state);
    network.set_weight(pre, post, weight);
    spiked
}

/// Bounds applied to a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLimits {
    /// Maximum queued spike groups awaiting re-injection; `None` is unbounded.
    pub input_queue_groups: Option<usize>,
    /// Total events (external plus recurrent) before the run is aborted.
    pub max_events: u64,
}

impl RunLimits {
    pub const DEFAULT_MAX_EVENTS: u64 = 1_000_000;

    pub fn unbounded() -> Self {
        Self {
            input_queue_groups: None,
            max_events: Self::DEFAULT_MAX_EVENTS,
        }
    }

    /// Limits matching an input scheduler of N/P vectors.
    pub fn for_params(params: &LifParams) -> Self {
        Self {
            input_queue_groups: Some(params.groups()),
            max_events: Self::DEFAULT_MAX_EVENTS,
        }
    }
}

impl Default for RunLimits {
    fn default() -> Self {
        Self::unbounded()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReferenceRun {
    pub events_executed: u64,
    pub sops: u64,
    pub output_spikes: Vec<OutputSpike>,
    /// Executed events in order, including recurrent ones.
    pub executed: Vec<AerEvent>,
}

/// Runs a stream to completion, re-injecting every spike as a neuron event.
///
/// Recurrent spikes are served before new external events, oldest group
/// first, ascending id within a group.
pub fn reference_run<I>(network: &mut Network, events: I, limits: RunLimits) -> Result<ReferenceRun, SimError>
where
    I: IntoIterator<Item = AerEvent>,
{
    let p = network.params.parallelism();
    let mut external = events.into_iter();
    let mut pending: VecDeque<VecDeque<usize>> = VecDeque::new();
    let mut run = ReferenceRun::default();

    loop {
        let event = if let Some(group) = pending.front_mut() {
            let src = group.pop_front().expect("queued groups are never empty");
            if group.is_empty() {
                pending.pop_front();
            }
            AerEvent::Neuron { src }
        } else if let Some(event) = external.next() {
            event
        } else {
            break;
        };

        if run.events_executed >= limits.max_events {
            return Err(SimError::EventBudgetExceeded {
                limit: limits.max_events,
            });
        }
        let event_index = run.events_executed;
        let outcome = scalar_reference_step(network, event)?;
        run.sops += outcome.sops;
        run.executed.push(event);
        run.output_spikes
            .extend(outcome.spikes.iter().map(|&neuron| OutputSpike { neuron, event_index }));

        let mut spikes = outcome.spikes.into_iter().peekable();
        while let Some(first) = spikes.next() {
            let group_id = first / p;
            let mut group = VecDeque::from([first]);
            while let Some(&next) = spikes.peek() {
                if next / p != group_id {
                    break;
                }
                group.push_back(next);
                spikes.next();
            }
            if let Some(capacity) = limits.input_queue_groups {
                if pending.len() >= capacity {
                    return Err(SimError::SchedulerOverflow {
                        role: SchedulerRole::Input,
                        capacity,
                        event_index,
                    });
                }
            }
            pending.push_back(group);
        }
        run.events_executed += 1;
    }
    Ok(run)
}
