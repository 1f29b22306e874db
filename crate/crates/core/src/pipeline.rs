//! Cycle-accurate executive.
//!
//! A neuron event walks the N/P neuron groups through a two-stage pipeline:
//! group `g` is read in cycle `g` and written back in cycle `g + 1`. Groups
//! alternate between the two neuron banks, so the read of one group and the
//! write of the previous one never hit the same bank, and one group retires
//! per cycle after a single fill cycle: N/P + 1 cycles per event.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::event::{AerEvent, EventKind, OutputSpike};
use crate::memory::{AccessLedger, MemGeometry, NeuronMemory, SynapseMemory, SynapseWord, WritePhase};
use crate::neuron::{lif_leak, synaptic_update, LifParams, NeuronState, CALCIUM_BYTES, NEURON_STATE_BYTES};
use crate::reference::{reference_run, Network, RunLimits};
use crate::scheduler::{FsmInputs, SchedulerError, SchedulerRole, SchedulerUnit, SpikeVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimingMode {
    /// Parallel two-bank pipeline.
    Thor,
    /// Time-multiplexed single-SOP datapath, two cycles per SOP.
    Baseline,
}

impl fmt::Display for TimingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimingMode::Thor => "thor",
            TimingMode::Baseline => "baseline",
        })
    }
}

impl FromStr for TimingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "thor" => Ok(TimingMode::Thor),
            "baseline" => Ok(TimingMode::Baseline),
            other => Err(format!("unknown timing mode `{other}` (expected thor or baseline)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    pub mode: TimingMode,
    /// AER handshake plus controller state change, charged once per event.
    pub event_overhead_cycles: u64,
    pub f_clk_hz: f64,
    /// Synapses per synapse-memory word in the baseline datapath.
    pub synapses_per_word_baseline: usize,
}

impl TimingConfig {
    pub const DEFAULT_OVERHEAD_CYCLES: u64 = 4;
    pub const DEFAULT_F_CLK_HZ: f64 = 400e6;

    pub fn thor() -> Self {
        Self {
            mode: TimingMode::Thor,
            event_overhead_cycles: Self::DEFAULT_OVERHEAD_CYCLES,
            f_clk_hz: Self::DEFAULT_F_CLK_HZ,
            synapses_per_word_baseline: 8,
        }
    }

    pub fn baseline() -> Self {
        Self {
            mode: TimingMode::Baseline,
            ..Self::thor()
        }
    }

    pub fn with_mode(self, mode: TimingMode) -> Self {
        Self { mode, ..self }
    }
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self::thor()
    }
}

/// What the datapath did in one core cycle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CycleActivity {
    pub read_bank: Option<usize>,
    pub write_bank: Option<usize>,
    /// Non-empty spike vector handed to both schedulers this cycle.
    pub spike_vector: Option<SpikeVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventResult {
    pub event: AerEvent,
    pub core_cycles: u64,
    pub overhead_cycles: u64,
    pub sop_count: u64,
    pub spike_vectors: Vec<SpikeVector>,
    /// One entry per core cycle.
    pub schedule: Vec<CycleActivity>,
    pub ledger_delta: AccessLedger,
}

impl EventResult {
    pub fn total_cycles(&self) -> u64 {
        self.core_cycles + self.overhead_cycles
    }

    pub fn spike_count(&self) -> u64 {
        self.spike_vectors.iter().map(|v| v.count() as u64).sum()
    }
}

/// Per-event row of a run trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub kind: EventKind,
    /// Stall, overhead and core cycles attributed to this event.
    pub cycles: u64,
    pub sops: u64,
    pub spikes_emitted: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub mode: TimingMode,
    pub n_neurons: usize,
    pub parallelism: usize,
    pub f_clk_hz: f64,
    pub total_cycles: u64,
    pub core_cycles: u64,
    pub overhead_cycles: u64,
    /// Cycles spent waiting for the output scheduler to drain.
    pub stall_cycles: u64,
    pub sops: u64,
    pub events: Vec<EventRecord>,
    pub output_spikes: Vec<OutputSpike>,
    pub ledger: AccessLedger,
}

impl RunTrace {
    fn empty(mode: TimingMode, params: &LifParams, f_clk_hz: f64) -> Self {
        Self {
            mode,
            n_neurons: params.n_neurons(),
            parallelism: params.parallelism(),
            f_clk_hz,
            total_cycles: 0,
            core_cycles: 0,
            overhead_cycles: 0,
            stall_cycles: 0,
            sops: 0,
            events: Vec::new(),
            output_spikes: Vec::new(),
            ledger: AccessLedger::default(),
        }
    }

    pub fn events_executed(&self) -> u64 {
        self.events.len() as u64
    }

    /// Simulated wall time at the trace's clock.
    pub fn elapsed_s(&self) -> f64 {
        self.total_cycles as f64 / self.f_clk_hz
    }

    /// SOPs per second at the trace's clock; zero for an empty trace.
    pub fn throughput_sops(&self) -> f64 {
        if self.total_cycles == 0 {
            0.0
        } else {
            self.sops as f64 * self.f_clk_hz / self.total_cycles as f64
        }
    }
}

/// Core cycles of a neuron or leak event in the parallel pipeline.
pub fn neuron_event_cycles(params: &LifParams) -> u64 {
    params.groups() as u64 + 1
}

/// Core cycles of a neuron or leak event in the baseline datapath.
pub fn baseline_neuron_event_cycles(params: &LifParams) -> u64 {
    2 * params.n_neurons() as u64
}

/// Cycles charged for a single SOP event in either mode.
pub const SYNAPSE_EVENT_CYCLES: u64 = 2;

/// Neuron memory, synapse memory and timing for one simulated core.
#[derive(Debug, Clone)]
pub struct Processor {
    params: LifParams,
    geometry: MemGeometry,
    timing: TimingConfig,
    neurons: NeuronMemory,
    synapses: SynapseMemory,
}

impl Processor {
    /// Loads `network` through the configuration port. Access counters start
    /// at zero afterwards.
    pub fn new(network: &Network, geometry: MemGeometry, timing: TimingConfig) -> Result<Self, SimError> {
        let params = network.params();
        if geometry.n != params.n_neurons() || geometry.p != params.parallelism() {
            return Err(crate::memory::MemoryError::WordWidth {
                expected: params.n_neurons() * 1000 + params.parallelism(),
                actual: geometry.n * 1000 + geometry.p,
            }
            .into());
        }
        let mut neurons = NeuronMemory::new(params.n_neurons(), params.parallelism(), params.online_learning());
        neurons.load(network.neurons())?;
        neurons.reset_counters();
        let mut synapses = SynapseMemory::new(geometry);
        synapses.load(network.weights())?;
        Ok(Self {
            params,
            geometry,
            timing,
            neurons,
            synapses,
        })
    }

    pub fn params(&self) -> LifParams {
        self.params
    }

    pub fn geometry(&self) -> &MemGeometry {
        &self.geometry
    }

    pub fn timing(&self) -> &TimingConfig {
        &self.timing
    }

    pub fn neuron_memory(&self) -> &NeuronMemory {
        &self.neurons
    }

    pub fn synapse_memory(&self) -> &SynapseMemory {
        &self.synapses
    }

    /// Reads back the architectural state without touching the counters.
    pub fn network(&self) -> Network {
        Network::from_parts(self.params, self.neurons.dump(), self.synapses.dump().to_vec())
            .expect("memories always hold a full network")
    }

    /// Memory-side counters accumulated since construction.
    pub fn ledger(&self) -> AccessLedger {
        AccessLedger {
            neuron: *self.neurons.counters(),
            synapse: self.synapses.counters(),
            ..Default::default()
        }
    }

    /// Flips the low bit of one stored weight. Harness self-test hook.
    #[doc(hidden)]
    pub fn inject_weight_fault(&mut self, pre: usize, post: usize) {
        let n = self.params.n_neurons();
        let cell = &mut self.synapses.dump_mut()[pre * n + post];
        *cell = crate::neuron::SynapseWeight::from_nibble(cell.get() ^ 1);
    }

    fn charge_idle(&mut self, cycles: u64) {
        let before = *self.neurons.counters();
        self.neurons.charge_idle(cycles, &before);
        self.synapses.charge_idle(cycles, 0);
    }

    fn require_mode(&self, expected: TimingMode) -> Result<(), SimError> {
        if self.timing.mode != expected {
            return Err(SimError::WrongMode {
                expected,
                actual: self.timing.mode,
            });
        }
        Ok(())
    }

    pub fn execute(&mut self, event: AerEvent) -> Result<EventResult, SimError> {
        match event {
            AerEvent::Neuron { src } => self.execute_neuron_event(src),
            AerEvent::Synapse { pre, post } => self.execute_synapse_event(pre, post),
            AerEvent::Leak => self.execute_leak_event(),
        }
    }

    pub fn execute_neuron_event(&mut self, src: usize) -> Result<EventResult, SimError> {
        self.require_mode(TimingMode::Thor)?;
        let event = AerEvent::Neuron { src };
        event.validate(self.params.n_neurons())?;
        self.run_group_pipeline(event, Some(src))
    }

    pub fn execute_leak_event(&mut self) -> Result<EventResult, SimError> {
        self.require_mode(TimingMode::Thor)?;
        self.run_group_pipeline(AerEvent::Leak, None)
    }

    /// Streams every group through read then write-back. `src` selects the
    /// synapse row for a neuron event; `None` applies a leak.
    fn run_group_pipeline(&mut self, event: AerEvent, src: Option<usize>) -> Result<EventResult, SimError> {
        let p = self.params.parallelism();
        let groups = self.params.groups();
        let learning = self.params.online_learning();
        let core_cycles = groups as u64 + 1;
        let start = self.ledger();
        let mut schedule = vec![CycleActivity::default(); groups + 1];
        let mut synapse_active = 0u64;
        let mut in_flight: Option<(usize, Vec<NeuronState>, Option<SynapseWord>, u64)> = None;

        for (cycle, activity) in schedule.iter_mut().enumerate() {
            let mut synapse_busy = false;

            if let Some((group, states, word, bits)) = in_flight.take() {
                let bank = group % 2;
                self.neurons
                    .neuron_write(bank, group / 2, &states, WritePhase::Inference)?;
                if let (Some(src), Some(word), true) = (src, word.as_ref(), learning) {
                    self.synapses.synapse_write(src, group, word)?;
                    synapse_busy = true;
                }
                activity.write_bank = Some(bank);
                if bits != 0 {
                    activity.spike_vector = Some(SpikeVector::new(bits, group * p));
                }
            }

            if cycle < groups {
                let group = cycle;
                let bank = group % 2;
                let mut states = self.neurons.neuron_read(bank, group / 2)?;
                activity.read_bank = Some(bank);
                let mut bits = 0u64;
                let word = match src {
                    Some(src) => {
                        let mut word = self.synapses.synapse_read(src, group)?;
                        synapse_busy = true;
                        for (lane, state) in states.iter_mut().enumerate() {
                            let (next, weight, spiked) = synaptic_update(*state, word.get(lane), learning);
                            *state = next;
                            word.set(lane, weight);
                            bits |= (spiked as u64) << lane;
                        }
                        Some(word)
                    }
                    None => {
                        for state in states.iter_mut() {
                            *state = lif_leak(*state, learning);
                        }
                        None
                    }
                };
                in_flight = Some((group, states, word, bits));
            }
            synapse_active += synapse_busy as u64;
        }

        Ok(self.finish_event(event, core_cycles, synapse_active, schedule, start))
    }

    pub fn execute_synapse_event(&mut self, pre: usize, post: usize) -> Result<EventResult, SimError> {
        self.require_mode(TimingMode::Thor)?;
        let event = AerEvent::Synapse { pre, post };
        event.validate(self.params.n_neurons())?;
        let p = self.params.parallelism();
        let learning = self.params.online_learning();
        let start = self.ledger();
        let slot = self.neurons.slot(post);
        let group = post / p;

        // Cycle 0: read the post neuron's entry and the synapse word.
        let mut states = self.neurons.neuron_read(slot.bank, slot.entry)?;
        let mut word = self.synapses.synapse_read(pre, group)?;
        let (next, weight, spiked) = synaptic_update(states[slot.lane], word.get(slot.lane), learning);
        states[slot.lane] = next;
        word.set(slot.lane, weight);

        // Cycle 1: write back.
        self.neurons
            .neuron_write(slot.bank, slot.entry, &states, WritePhase::Inference)?;
        let mut synapse_active = 1;
        if learning {
            self.synapses.synapse_write(pre, group, &word)?;
            synapse_active += 1;
        }
        let schedule = vec![
            CycleActivity {
                read_bank: Some(slot.bank),
                ..Default::default()
            },
            CycleActivity {
                write_bank: Some(slot.bank),
                spike_vector: spiked.then(|| SpikeVector::new(1 << slot.lane, group * p)),
                ..Default::default()
            },
        ];
        Ok(self.finish_event(event, SYNAPSE_EVENT_CYCLES, synapse_active, schedule, start))
    }

    fn finish_event(
        &mut self,
        event: AerEvent,
        core_cycles: u64,
        synapse_active: u64,
        schedule: Vec<CycleActivity>,
        start: AccessLedger,
    ) -> EventResult {
        self.neurons.charge_idle(core_cycles, &start.neuron);
        self.synapses.charge_idle(core_cycles, synapse_active);
        let sop_count = match event {
            AerEvent::Neuron { .. } => self.params.n_neurons() as u64,
            AerEvent::Synapse { .. } => 1,
            AerEvent::Leak => 0,
        };
        let mut ledger_delta = self.ledger() - start;
        ledger_delta.controller_events = 1;
        EventResult {
            event,
            core_cycles,
            overhead_cycles: self.timing.event_overhead_cycles,
            sop_count,
            spike_vectors: schedule.iter().filter_map(|a| a.spike_vector).collect(),
            schedule,
            ledger_delta,
        }
    }
}

/// Output side of a run: the output scheduler, drained by an always-ready
/// AER link at one spike per cycle, plus the originating event of every
/// queued vector.
struct OutputPort {
    unit: SchedulerUnit,
    origins: VecDeque<u64>,
}

impl OutputPort {
    fn cycle(
        &mut self,
        vector: Option<SpikeVector>,
        event_index: u64,
        log: &mut Vec<OutputSpike>,
    ) -> Result<(), SimError> {
        let out = self
            .unit
            .fsm_step(FsmInputs {
                new_vector: vector,
                trigger: true,
            })
            .map_err(|e| overflow(e, event_index))?;
        if let Some(neuron) = out.spike_id {
            let origin = *self.origins.front().expect("every queued vector has an origin");
            log.push(OutputSpike {
                neuron,
                event_index: origin,
            });
        }
        if out.fifo_pop {
            self.origins.pop_front();
        }
        if vector.is_some_and(|v| !v.is_empty()) {
            self.origins.push_back(event_index);
        }
        Ok(())
    }
}

fn overflow(err: SchedulerError, event_index: u64) -> SimError {
    match err {
        SchedulerError::Overflow { role, capacity } => SimError::SchedulerOverflow {
            role,
            capacity,
            event_index,
        },
        SchedulerError::InvalidVector { .. } => unreachable!("the datapath only emits well-formed vectors: {err}"),
    }
}

/// Runs an event stream on the parallel pipeline until the stream is
/// exhausted and both schedulers are drained.
///
/// Recurrent spikes queued in the input scheduler are served before new
/// external events. Before each event the controller waits for the output
/// scheduler to empty, so one event's vectors always fit.
pub fn run<I>(processor: &mut Processor, events: I) -> Result<RunTrace, SimError>
where
    I: IntoIterator<Item = AerEvent>,
{
    run_with_budget(processor, events, RunLimits::DEFAULT_MAX_EVENTS)
}

pub fn run_with_budget<I>(processor: &mut Processor, events: I, max_events: u64) -> Result<RunTrace, SimError>
where
    I: IntoIterator<Item = AerEvent>,
{
    processor.require_mode(TimingMode::Thor)?;
    let params = processor.params;
    let overhead = processor.timing.event_overhead_cycles;
    let start = processor.ledger();
    let mut trace = RunTrace::empty(TimingMode::Thor, &params, processor.timing.f_clk_hz);
    let mut input = SchedulerUnit::new(SchedulerRole::Input, params.n_neurons(), params.parallelism());
    let mut output = OutputPort {
        unit: SchedulerUnit::new(SchedulerRole::Output, params.n_neurons(), params.parallelism()),
        origins: VecDeque::new(),
    };
    let mut external = events.into_iter();

    loop {
        let event_index = trace.events_executed();
        let mut stall = 0u64;
        while !output.unit.is_empty() {
            output.cycle(None, event_index, &mut trace.output_spikes)?;
            stall += 1;
        }
        processor.charge_idle(stall);
        trace.stall_cycles += stall;
        trace.total_cycles += stall;

        // "Send next input" is raised in the first cycle of the event.
        let event = match input.decode_next(true) {
            Some(src) => AerEvent::Neuron { src },
            None => match external.next() {
                Some(event) => event,
                None => break,
            },
        };
        if event_index >= max_events {
            return Err(SimError::EventBudgetExceeded { limit: max_events });
        }

        let result = processor.execute(event)?;
        for _ in 0..overhead {
            output.cycle(None, event_index, &mut trace.output_spikes)?;
        }
        for activity in &result.schedule {
            if let Some(vector) = activity.spike_vector {
                input
                    .fsm_step(FsmInputs {
                        new_vector: Some(vector),
                        trigger: false,
                    })
                    .map_err(|e| overflow(e, event_index))?;
            }
            output.cycle(activity.spike_vector, event_index, &mut trace.output_spikes)?;
        }
        processor.charge_idle(overhead);

        let cycles = result.core_cycles + overhead;
        trace.core_cycles += result.core_cycles;
        trace.overhead_cycles += overhead;
        trace.total_cycles += cycles;
        trace.sops += result.sop_count;
        trace.events.push(EventRecord {
            kind: event.kind(),
            cycles: cycles + stall,
            sops: result.sop_count,
            spikes_emitted: result.spike_count(),
        });
    }

    let mut drain = 0u64;
    let last = trace.events_executed().saturating_sub(1);
    while !output.unit.is_empty() {
        output.cycle(None, last, &mut trace.output_spikes)?;
        drain += 1;
    }
    processor.charge_idle(drain);
    trace.stall_cycles += drain;
    trace.total_cycles += drain;

    let mut ledger = processor.ledger() - start;
    ledger.scheduler[SchedulerRole::Input.index()] = input.counters();
    ledger.scheduler[SchedulerRole::Output.index()] = output.unit.counters();
    ledger.controller_events = trace.events_executed();
    trace.ledger = ledger;
    Ok(trace)
}

/// Runs a stream with the baseline timing: the scalar reference provides
/// the function, every SOP costs two cycles and the synapse memory is read
/// once per word of `synapses_per_word_baseline` synapses.
pub fn baseline_run<I>(processor: &mut Processor, events: I) -> Result<RunTrace, SimError>
where
    I: IntoIterator<Item = AerEvent>,
{
    baseline_run_with_budget(processor, events, RunLimits::DEFAULT_MAX_EVENTS)
}

pub fn baseline_run_with_budget<I>(processor: &mut Processor, events: I, max_events: u64) -> Result<RunTrace, SimError>
where
    I: IntoIterator<Item = AerEvent>,
{
    processor.require_mode(TimingMode::Baseline)?;
    let params = processor.params;
    let timing = processor.timing;
    let n = params.n_neurons() as u64;
    let learning = params.online_learning();
    let per_word = timing.synapses_per_word_baseline.max(1) as u64;

    let mut network = processor.network();
    let limits = RunLimits {
        input_queue_groups: None,
        max_events,
    };
    let reference = reference_run(&mut network, events, limits)?;

    let mut trace = RunTrace::empty(TimingMode::Baseline, &params, timing.f_clk_hz);
    let mut spikes_per_event = vec![0u64; reference.executed.len()];
    for spike in &reference.output_spikes {
        spikes_per_event[spike.event_index as usize] += 1;
    }
    let mut ledger = AccessLedger::default();
    let neuron_reads_per_sop: Vec<usize> = (0..NEURON_STATE_BYTES)
        .filter(|b| learning || !CALCIUM_BYTES.contains(b))
        .collect();

    for (event, spikes) in reference.executed.iter().zip(spikes_per_event) {
        let (core, sops, neuron_accesses, synapse_words) = match event {
            AerEvent::Neuron { .. } => (baseline_neuron_event_cycles(&params), n, n, n.div_ceil(per_word)),
            AerEvent::Synapse { .. } => (SYNAPSE_EVENT_CYCLES, 1, 1, 1),
            AerEvent::Leak => (baseline_neuron_event_cycles(&params), 0, n, 0),
        };
        for &b in &neuron_reads_per_sop {
            ledger.neuron[0][b].reads += neuron_accesses;
        }
        for b in 0..NEURON_STATE_BYTES {
            let writable = b == crate::neuron::BYTE_V_MEM || (learning && b == crate::neuron::BYTE_CA_LEVEL);
            if writable {
                ledger.neuron[0][b].writes += neuron_accesses;
            } else {
                ledger.neuron[0][b].gated_cycles += neuron_accesses;
            }
        }
        ledger.synapse.reads += synapse_words;
        if learning {
            ledger.synapse.writes += synapse_words;
        }
        let cycles = core + timing.event_overhead_cycles;
        trace.core_cycles += core;
        trace.overhead_cycles += timing.event_overhead_cycles;
        trace.total_cycles += cycles;
        trace.sops += sops;
        trace.events.push(EventRecord {
            kind: event.kind(),
            cycles,
            sops,
            spikes_emitted: spikes,
        });
    }
    ledger.controller_events = reference.events_executed;
    trace.ledger = ledger;
    trace.output_spikes = reference.output_spikes;

    processor.neurons.load(network.neurons())?;
    processor.neurons.reset_counters();
    processor.synapses.load(network.weights())?;
    Ok(trace)
}

/// Runs in whichever mode the processor is configured for.
pub fn simulate<I>(processor: &mut Processor, events: I) -> Result<RunTrace, SimError>
where
    I: IntoIterator<Item = AerEvent>,
{
    match processor.timing.mode {
        TimingMode::Thor => run(processor, events),
        TimingMode::Baseline => baseline_run(processor, events),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::{mem_geometry, MemType};
    use crate::neuron::SynapseWeight;
    use crate::reference::scalar_reference_step;

    fn processor(network: &Network, timing: TimingConfig) -> Processor {
        let params = network.params();
        let n = params.n_neurons();
        let geometry = mem_geometry(n, params.parallelism(), 4 * n * n, MemType::Scm).unwrap();
        Processor::new(network, geometry, timing).unwrap()
    }

    fn quiet_network(n: usize, p: usize, learning: bool) -> Network {
        let mut net = Network::new(LifParams::new(n, p, learning).unwrap());
        for i in 0..n {
            net.set_neuron(
                i,
                NeuronState {
                    v_thresh: 255,
                    leak: 5,
                    ..Default::default()
                },
            );
        }
        net
    }

    #[test]
    fn neuron_event_cycle_counts() {
        for (n, p, expected) in [(256, 32, 9), (256, 1, 257), (8, 4, 3), (64, 8, 9)] {
            let mut proc = processor(&quiet_network(n, p, false), TimingConfig::thor());
            let r = proc.execute_neuron_event(0).unwrap();
            assert_eq!(r.core_cycles, expected, "N={n} P={p}");
            assert_eq!(r.sop_count, n as u64);
            assert!(r.spike_vectors.is_empty());
        }
    }

    #[test]
    fn banks_alternate_every_cycle() {
        let mut proc = processor(&quiet_network(64, 4, true), TimingConfig::thor());
        let r = proc.execute_neuron_event(3).unwrap();
        for pair in r.schedule.windows(2) {
            if let (Some(a), Some(b)) = (pair[0].read_bank, pair[1].read_bank) {
                assert_ne!(a, b);
            }
            if let (Some(r), Some(w)) = (pair[1].read_bank, pair[1].write_bank) {
                assert_ne!(r, w, "read and write share a bank in one cycle");
            }
        }
        assert_eq!(r.schedule[0].write_bank, None);
        assert_eq!(r.schedule.last().unwrap().read_bank, None);
    }

    #[test]
    fn leak_event_matches_scalar() {
        let mut net = quiet_network(256, 32, false);
        for i in 0..256 {
            let mut s = net.neuron(i);
            s.v_mem = 100;
            net.set_neuron(i, s);
        }
        let mut proc = processor(&net, TimingConfig::thor());
        let r = proc.execute_leak_event().unwrap();
        assert_eq!(r.core_cycles, 9);
        assert_eq!(r.sop_count, 0);
        assert!(proc.network().neurons().iter().all(|s| s.v_mem == 95));
    }

    #[test]
    fn synapse_event_fires_lane_zero() {
        let mut net = quiet_network(256, 32, false);
        net.set_neuron(
            0,
            NeuronState {
                v_mem: 250,
                v_thresh: 255,
                ..Default::default()
            },
        );
        net.set_weight(0, 0, SynapseWeight::MAX);
        let mut proc = processor(&net, TimingConfig::thor());
        let r = proc.execute_synapse_event(0, 0).unwrap();
        assert_eq!(r.core_cycles, 2);
        assert_eq!(r.sop_count, 1);
        assert_eq!(r.spike_vectors, vec![SpikeVector::new(1, 0)]);
        assert!(proc.execute_synapse_event(0, 256).is_err());
    }

    #[test]
    fn learning_off_never_touches_calcium() {
        let mut proc = processor(&quiet_network(32, 4, false), TimingConfig::thor());
        proc.execute_neuron_event(1).unwrap();
        proc.execute_leak_event().unwrap();
        proc.execute_synapse_event(1, 2).unwrap();
        let ledger = proc.ledger();
        for b in CALCIUM_BYTES {
            let c = ledger.neuron_sub_bank_total(b);
            assert_eq!((c.reads, c.writes), (0, 0), "sub-bank {b}");
        }
        assert_eq!(ledger.synapse.writes, 0);
    }

    #[test]
    fn single_event_run_totals() {
        let mut proc = processor(&quiet_network(256, 32, false), TimingConfig::thor());
        let trace = run(&mut proc, [AerEvent::Neuron { src: 7 }]).unwrap();
        assert_eq!(trace.total_cycles, 13);
        assert_eq!(trace.sops, 256);
        let empty = run(&mut proc, []).unwrap();
        assert_eq!((empty.total_cycles, empty.sops), (0, 0));
    }

    #[test]
    fn recurrent_spikes_replay_like_reference() {
        let mut net = quiet_network(16, 4, true);
        for i in 0..16 {
            let mut s = net.neuron(i);
            s.v_thresh = 20;
            s.ca_theta_hi = 4;
            net.set_neuron(i, s);
        }
        for post in [3, 5, 6, 12] {
            net.set_weight(0, post, SynapseWeight::MAX);
            net.set_weight(0, post, SynapseWeight::new(10).unwrap());
        }
        net.set_weight(3, 9, SynapseWeight::MAX);
        let stream = [AerEvent::Neuron { src: 0 }, AerEvent::Neuron { src: 0 }, AerEvent::Leak];

        let mut proc = processor(&net, TimingConfig::thor());
        let trace = run(&mut proc, stream).unwrap();
        let mut oracle = net.clone();
        let expected = reference_run(&mut oracle, stream, RunLimits::for_params(&net.params())).unwrap();
        assert_eq!(proc.network(), oracle);
        assert_eq!(trace.output_spikes, expected.output_spikes);
        assert_eq!(trace.sops, expected.sops);
        assert_eq!(trace.sops, 16 * (expected.events_executed - 1));
        assert!(expected.events_executed > 3);
    }

    #[test]
    fn per_event_equivalence_small() {
        let mut net = quiet_network(8, 2, true);
        for i in 0..8 {
            for j in 0..8 {
                net.set_weight(i, j, SynapseWeight::new(((i * 3 + j * 5) % 16) as u8).unwrap());
            }
            let mut s = net.neuron(i);
            s.v_thresh = 30 + i as u8;
            s.ca_theta_mem = 10;
            s.ca_theta_hi = 200;
            net.set_neuron(i, s);
        }
        let mut proc = processor(&net, TimingConfig::thor());
        let mut oracle = net.clone();
        let events = [
            AerEvent::Neuron { src: 1 },
            AerEvent::Synapse { pre: 2, post: 5 },
            AerEvent::Neuron { src: 7 },
            AerEvent::Leak,
            AerEvent::Neuron { src: 4 },
        ];
        for e in events {
            let r = proc.execute(e).unwrap();
            let o = scalar_reference_step(&mut oracle, e).unwrap();
            let spikes: Vec<usize> = r
                .spike_vectors
                .iter()
                .flat_map(|v| v.spikes().collect::<Vec<_>>())
                .collect();
            assert_eq!(spikes, o.spikes);
            assert_eq!(r.sop_count, o.sops);
            assert_eq!(proc.network(), oracle);
        }
    }

    #[test]
    fn baseline_timing() {
        let mut proc = processor(&quiet_network(256, 32, false), TimingConfig::baseline());
        let trace = baseline_run(&mut proc, [AerEvent::Neuron { src: 0 }]).unwrap();
        assert_eq!(trace.core_cycles, 512);
        assert_eq!(trace.ledger.synapse.reads, 32);
        assert!(matches!(proc.execute_neuron_event(0), Err(SimError::WrongMode { .. })));
        assert!(matches!(run(&mut proc, []), Err(SimError::WrongMode { .. })));
    }
}
