use std::fmt::Write as _;

use super::{content_lines, expect_magic, parse_hz, parse_num, FormatError};
use crate::event::{EventKind, OutputSpike};
use crate::pipeline::{EventRecord, RunTrace, TimingMode};

pub const TRACE_MAGIC: &str = "THORSIM v1 trace";
pub const SPIKES_MAGIC: &str = "THORSIM v1 spikes";

const EVENT_HEADER: &str = "event,kind,cycles,sops,spikes_emitted";
const SUMMARY_HEADER: &str = "summary,value";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSummary {
    pub mode: TimingMode,
    pub n_neurons: usize,
    pub parallelism: usize,
    pub f_clk_hz: f64,
    pub total_cycles: u64,
    pub core_cycles: u64,
    pub overhead_cycles: u64,
    pub stall_cycles: u64,
    pub sops: u64,
    pub events: u64,
    pub output_spikes: u64,
    pub throughput_sops: f64,
}

impl TraceSummary {
    pub fn of(trace: &RunTrace) -> Self {
        Self {
            mode: trace.mode,
            n_neurons: trace.n_neurons,
            parallelism: trace.parallelism,
            f_clk_hz: trace.f_clk_hz,
            total_cycles: trace.total_cycles,
            core_cycles: trace.core_cycles,
            overhead_cycles: trace.overhead_cycles,
            stall_cycles: trace.stall_cycles,
            sops: trace.sops,
            events: trace.events_executed(),
            output_spikes: trace.output_spikes.len() as u64,
            throughput_sops: trace.throughput_sops(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub records: Vec<EventRecord>,
    pub summary: TraceSummary,
}

/// Per-event rows followed by a `summary,value` block.
pub fn trace_to_csv(trace: &RunTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TRACE_MAGIC}");
    let _ = writeln!(out, "{EVENT_HEADER}");
    for (i, r) in trace.events.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{},{},{}", r.kind, r.cycles, r.sops, r.spikes_emitted);
    }
    let s = TraceSummary::of(trace);
    let _ = writeln!(out, "{SUMMARY_HEADER}");
    let _ = writeln!(out, "mode,{}", s.mode);
    let _ = writeln!(out, "n_neurons,{}", s.n_neurons);
    let _ = writeln!(out, "parallelism,{}", s.parallelism);
    let _ = writeln!(out, "f_clk_hz,{}", s.f_clk_hz);
    let _ = writeln!(out, "total_cycles,{}", s.total_cycles);
    let _ = writeln!(out, "core_cycles,{}", s.core_cycles);
    let _ = writeln!(out, "overhead_cycles,{}", s.overhead_cycles);
    let _ = writeln!(out, "stall_cycles,{}", s.stall_cycles);
    let _ = writeln!(out, "sops,{}", s.sops);
    let _ = writeln!(out, "events,{}", s.events);
    let _ = writeln!(out, "output_spikes,{}", s.output_spikes);
    let _ = writeln!(out, "throughput_sops,{:e}", s.throughput_sops);
    out
}

fn parse_kind(line: usize, token: &str) -> Result<EventKind, FormatError> {
    match token {
        "NEUR" => Ok(EventKind::Neuron),
        "SYN" => Ok(EventKind::Synapse),
        "LEAK" => Ok(EventKind::Leak),
        _ => Err(FormatError::syntax(line, format!("unknown event kind `{token}`"))),
    }
}

pub fn parse_trace_csv(text: &str) -> Result<ParsedTrace, FormatError> {
    let mut lines = content_lines(text).peekable();
    expect_magic(&mut lines, TRACE_MAGIC, false)?;
    match lines.next() {
        Some((_, EVENT_HEADER)) => {}
        Some((n, _)) => return Err(FormatError::syntax(n, format!("expected `{EVENT_HEADER}`"))),
        None => return Err(FormatError::Missing("event header")),
    }

    let mut records = Vec::new();
    loop {
        let (n, line) = lines.next().ok_or(FormatError::Missing("summary"))?;
        if line == SUMMARY_HEADER {
            break;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [index, kind, cycles, sops, spikes] = fields.as_slice() else {
            return Err(FormatError::syntax(n, "event row needs 5 fields"));
        };
        if parse_num::<usize>(n, "event index", index)? != records.len() {
            return Err(FormatError::syntax(n, format!("event index {index} out of sequence")));
        }
        records.push(EventRecord {
            kind: parse_kind(n, kind)?,
            cycles: parse_num(n, "cycles", cycles)?,
            sops: parse_num(n, "sops", sops)?,
            spikes_emitted: parse_num(n, "spikes", spikes)?,
        });
    }

    let mut values = std::collections::HashMap::new();
    for (n, line) in lines {
        let (key, value) = line
            .split_once(',')
            .ok_or_else(|| FormatError::syntax(n, "summary row needs `key,value`"))?;
        if values.insert(key, (n, value)).is_some() {
            return Err(FormatError::syntax(n, format!("duplicate summary key `{key}`")));
        }
    }
    let mut take = |key: &'static str| values.remove(key).ok_or(FormatError::Missing(key));
    let num = |(n, v): (usize, &str), key: &str| parse_num::<u64>(n, key, v);
    let (mode_line, mode) = take("mode")?;
    let summary = TraceSummary {
        mode: mode.parse().map_err(|e| FormatError::syntax(mode_line, e))?,
        n_neurons: num(take("n_neurons")?, "n_neurons")? as usize,
        parallelism: num(take("parallelism")?, "parallelism")? as usize,
        f_clk_hz: {
            let (n, v) = take("f_clk_hz")?;
            parse_hz(n, v)?
        },
        total_cycles: num(take("total_cycles")?, "total_cycles")?,
        core_cycles: num(take("core_cycles")?, "core_cycles")?,
        overhead_cycles: num(take("overhead_cycles")?, "overhead_cycles")?,
        stall_cycles: num(take("stall_cycles")?, "stall_cycles")?,
        sops: num(take("sops")?, "sops")?,
        events: num(take("events")?, "events")?,
        output_spikes: num(take("output_spikes")?, "output_spikes")?,
        throughput_sops: {
            let (n, v) = take("throughput_sops")?;
            v.parse::<f64>()
                .ok()
                .filter(|t| t.is_finite() && *t >= 0.0)
                .ok_or_else(|| FormatError::syntax(n, format!("bad throughput `{v}`")))?
        },
    };
    if let Some((key, (n, _))) = values.into_iter().min_by_key(|(_, (n, _))| *n) {
        return Err(FormatError::syntax(n, format!("unknown summary key `{key}`")));
    }
    if summary.events != records.len() as u64 {
        return Err(FormatError::Constraint(format!(
            "summary lists {} events but {} rows are present",
            summary.events,
            records.len()
        )));
    }
    Ok(ParsedTrace { records, summary })
}

/// `SPIKE <neuron_id> <event_index>` lines in emission order.
pub fn spike_log_to_string(spikes: &[OutputSpike]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SPIKES_MAGIC}");
    for s in spikes {
        let _ = writeln!(out, "SPIKE {} {}", s.neuron, s.event_index);
    }
    out
}

pub fn parse_spike_log(text: &str) -> Result<Vec<OutputSpike>, FormatError> {
    let mut lines = content_lines(text).peekable();
    expect_magic(&mut lines, SPIKES_MAGIC, false)?;
    lines
        .map(
            |(n, line)| match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["SPIKE", id, index] => Ok(OutputSpike {
                    neuron: parse_num(n, "neuron id", id)?,
                    event_index: parse_num(n, "event index", index)?,
                }),
                _ => Err(FormatError::syntax(n, format!("malformed spike line `{line}`"))),
            },
        )
        .collect()
}
