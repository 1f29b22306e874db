use std::collections::HashMap;
use std::fmt::Write as _;

use super::{content_lines, expect_magic, parse_hz, parse_num, FormatError};
use crate::error::SimError;
use crate::memory::{mem_geometry, GeometryError, MemGeometry, MemType};
use crate::neuron::{LifParams, NeuronState, SynapseWeight, NEURON_STATE_BYTES};
use crate::pipeline::{Processor, TimingConfig, TimingMode};
use crate::reference::Network;

pub const NETWORK_MAGIC: &str = "THORSIM v1 network";

/// Everything needed to build a processor: the initial architectural state,
/// the synapse-memory organisation and the timing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub network: Network,
    pub bank_bits: usize,
    pub mem_type: MemType,
    pub timing: TimingConfig,
}

impl NetworkConfig {
    /// Largest power-of-two bank of at most 32 Kib that tiles the crossbar.
    pub fn default_bank_bits(n_neurons: usize) -> usize {
        (4 * n_neurons * n_neurons).min(32768)
    }

    pub fn new(
        network: Network,
        bank_bits: usize,
        mem_type: MemType,
        timing: TimingConfig,
    ) -> Result<Self, FormatError> {
        let config = Self {
            network,
            bank_bits,
            mem_type,
            timing,
        };
        config.geometry().map_err(|e| FormatError::Constraint(e.to_string()))?;
        Ok(config)
    }

    pub fn geometry(&self) -> Result<MemGeometry, GeometryError> {
        let params = self.network.params();
        mem_geometry(params.n_neurons(), params.parallelism(), self.bank_bits, self.mem_type)
    }

    pub fn processor(&self) -> Result<Processor, SimError> {
        let geometry = self.geometry().map_err(crate::memory::MemoryError::from)?;
        Processor::new(&self.network, geometry, self.timing)
    }
}

fn parse_record(line: usize, tokens: &[&str]) -> Result<NeuronState, FormatError> {
    if tokens.len() != NEURON_STATE_BYTES {
        return Err(FormatError::syntax(
            line,
            format!(
                "neuron record needs {NEURON_STATE_BYTES} byte values, found {}",
                tokens.len()
            ),
        ));
    }
    let mut bytes = [0u8; NEURON_STATE_BYTES];
    for (b, t) in bytes.iter_mut().zip(tokens) {
        *b = parse_num(line, "neuron byte", t)?;
    }
    Ok(NeuronState::from_bytes(bytes))
}

fn parse_weight(line: usize, token: &str) -> Result<SynapseWeight, FormatError> {
    let value: u8 = parse_num(line, "weight", token)?;
    SynapseWeight::new(value).map_err(|e| FormatError::syntax(line, e.to_string()))
}

fn parse_flag(line: usize, token: &str) -> Result<bool, FormatError> {
    match token {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(FormatError::syntax(
            line,
            format!("expected `on` or `off`, found `{token}`"),
        )),
    }
}

fn single<'a>(line: usize, key: &str, args: &[&'a str]) -> Result<&'a str, FormatError> {
    match args {
        [value] => Ok(value),
        _ => Err(FormatError::syntax(line, format!("`{key}` takes exactly one value"))),
    }
}

pub fn parse_network(text: &str) -> Result<NetworkConfig, FormatError> {
    let mut lines = content_lines(text).peekable();
    expect_magic(&mut lines, NETWORK_MAGIC, false)?;

    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut n: Option<usize> = None;
    let mut p: Option<usize> = None;
    let mut bank_bits: Option<usize> = None;
    let mut mem_type = MemType::Scm;
    let mut learning = false;
    let mut timing = TimingConfig::thor();
    let mut neuron_default = NeuronState::default();
    let mut neurons: Vec<(usize, usize, NeuronState)> = Vec::new();
    let mut weight_default = SynapseWeight::ZERO;
    let mut dense: Option<Vec<SynapseWeight>> = None;
    let mut synapses: Vec<(usize, usize, usize, SynapseWeight)> = Vec::new();

    while let Some((ln, line)) = lines.next() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (key, args) = (tokens[0], &tokens[1..]);
        let repeatable = matches!(key, "neuron" | "synapse");
        if !repeatable {
            if let Some(first) = seen.insert(key, ln) {
                return Err(FormatError::syntax(
                    ln,
                    format!("`{key}` already given on line {first}"),
                ));
            }
        }
        match key {
            "neurons" => n = Some(parse_num(ln, "neurons", single(ln, key, args)?)?),
            "parallelism" => p = Some(parse_num(ln, "parallelism", single(ln, key, args)?)?),
            "bank_bits" => bank_bits = Some(parse_num(ln, "bank_bits", single(ln, key, args)?)?),
            "memory" => {
                mem_type = single(ln, key, args)?
                    .parse()
                    .map_err(|e: crate::memory::UnknownMemType| FormatError::syntax(ln, e.to_string()))?
            }
            "learning" => learning = parse_flag(ln, single(ln, key, args)?)?,
            "mode" => {
                timing.mode = single(ln, key, args)?
                    .parse::<TimingMode>()
                    .map_err(|e| FormatError::syntax(ln, e))?
            }
            "overhead_cycles" => {
                timing.event_overhead_cycles = parse_num(ln, "overhead_cycles", single(ln, key, args)?)?
            }
            "clock_hz" => timing.f_clk_hz = parse_hz(ln, single(ln, key, args)?)?,
            "neuron_default" => neuron_default = parse_record(ln, args)?,
            "neuron" => {
                let (id, record) = args
                    .split_first()
                    .ok_or_else(|| FormatError::syntax(ln, "`neuron` needs an id and a record"))?;
                neurons.push((ln, parse_num(ln, "neuron id", id)?, parse_record(ln, record)?));
            }
            "weight_default" => weight_default = parse_weight(ln, single(ln, key, args)?)?,
            "synapse" => match args {
                [pre, post, w] => synapses.push((
                    ln,
                    parse_num(ln, "pre-synaptic id", pre)?,
                    parse_num(ln, "post-synaptic id", post)?,
                    parse_weight(ln, w)?,
                )),
                _ => return Err(FormatError::syntax(ln, "`synapse` takes <pre> <post> <weight>")),
            },
            "weights" => {
                if args != ["dense"] {
                    return Err(FormatError::syntax(ln, "expected `weights dense`"));
                }
                let n = n.ok_or_else(|| FormatError::syntax(ln, "`weights dense` must follow `neurons`"))?;
                let mut matrix = Vec::with_capacity(n * n);
                for row in 0..n {
                    let (rl, text) = lines
                        .next()
                        .ok_or_else(|| FormatError::syntax(ln, format!("dense weights end after {row} of {n} rows")))?;
                    if text.len() != n || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
                        return Err(FormatError::syntax(rl, format!("dense row must be {n} hex digits")));
                    }
                    matrix.extend(text.bytes().map(|b| {
                        SynapseWeight::from_nibble((b as char).to_digit(16).expect("checked hex digit") as u8)
                    }));
                }
                dense = Some(matrix);
            }
            _ => return Err(FormatError::syntax(ln, format!("unknown key `{key}`"))),
        }
    }

    let n = n.ok_or(FormatError::Missing("neurons"))?;
    let p = p.ok_or(FormatError::Missing("parallelism"))?;
    let params = LifParams::new(n, p, learning).map_err(|e| FormatError::Constraint(e.to_string()))?;
    let bank_bits = bank_bits.unwrap_or_else(|| NetworkConfig::default_bank_bits(n));

    let mut states = vec![neuron_default; n];
    for (ln, id, state) in neurons {
        if id >= n {
            return Err(FormatError::syntax(
                ln,
                format!("neuron id {id} out of range for {n} neurons"),
            ));
        }
        states[id] = state;
    }
    let mut weights = dense.unwrap_or_else(|| vec![weight_default; n * n]);
    for (ln, pre, post, w) in synapses {
        if pre >= n || post >= n {
            return Err(FormatError::syntax(
                ln,
                format!("synapse {pre} -> {post} out of range for {n} neurons"),
            ));
        }
        weights[pre * n + post] = w;
    }
    let network = Network::from_parts(params, states, weights).expect("shapes built from n");
    NetworkConfig::new(network, bank_bits, mem_type, timing)
}

/// Canonical text form. The most common neuron record (lowest on ties)
/// becomes `neuron_default`; weights are written dense when more than one
/// in sixteen is non-zero, as sparse triples otherwise.
pub fn network_to_string(config: &NetworkConfig) -> String {
    let net = &config.network;
    let params = net.params();
    let n = params.n_neurons();
    let mut out = String::new();
    let _ = writeln!(out, "{NETWORK_MAGIC}");
    let _ = writeln!(out, "neurons {n}");
    let _ = writeln!(out, "parallelism {}", params.parallelism());
    let _ = writeln!(out, "bank_bits {}", config.bank_bits);
    let _ = writeln!(out, "memory {}", config.mem_type.as_str().to_ascii_lowercase());
    let _ = writeln!(out, "learning {}", if params.online_learning() { "on" } else { "off" });
    let _ = writeln!(out, "mode {}", config.timing.mode);
    let _ = writeln!(out, "overhead_cycles {}", config.timing.event_overhead_cycles);
    let _ = writeln!(out, "clock_hz {}", config.timing.f_clk_hz);

    let mut counts: HashMap<[u8; NEURON_STATE_BYTES], usize> = HashMap::new();
    for s in net.neurons() {
        *counts.entry(s.to_bytes()).or_default() += 1;
    }
    let default = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(bytes, _)| *bytes)
        .unwrap_or_default();
    let record = |bytes: [u8; NEURON_STATE_BYTES]| bytes.map(|b| b.to_string()).join(" ");
    let _ = writeln!(out, "neuron_default {}", record(default));
    for (id, s) in net.neurons().iter().enumerate() {
        if s.to_bytes() != default {
            let _ = writeln!(out, "neuron {id} {}", record(s.to_bytes()));
        }
    }

    let _ = writeln!(out, "weight_default 0");
    let nonzero = net.weights().iter().filter(|w| w.get() != 0).count();
    if nonzero * 16 > n * n {
        let _ = writeln!(out, "weights dense");
        for row in net.weights().chunks(n) {
            let line: String = row
                .iter()
                .map(|w| char::from_digit(w.get() as u32, 16).expect("nibble"))
                .collect();
            let _ = writeln!(out, "{line}");
        }
    } else {
        for (i, w) in net.weights().iter().enumerate() {
            if w.get() != 0 {
                let _ = writeln!(out, "synapse {} {} {}", i / n, i % n, w.get());
            }
        }
    }
    out
}
