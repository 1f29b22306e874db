use std::fmt::Write as _;

use super::{content_lines, expect_magic, parse_hz, parse_num, FormatError};
use crate::memory::MemType;

pub const SWEEP_MAGIC: &str = "THORSIM v1 sweep";

/// Design points to evaluate: the cartesian product of the three lists,
/// each running `events` neuron events.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSpec {
    pub parallelism: Vec<usize>,
    pub memory: Vec<MemType>,
    pub clock_hz: Vec<f64>,
    pub events: usize,
    /// Overrides the network's bank size when given.
    pub bank_bits: Option<usize>,
}

impl SweepSpec {
    pub const DEFAULT_EVENTS: usize = 64;

    pub fn point_count(&self) -> usize {
        self.parallelism.len() * self.memory.len() * self.clock_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_count() == 0 || self.events == 0
    }
}

/// An empty or comment-only file parses to an empty spec.
pub fn parse_sweep(text: &str) -> Result<SweepSpec, FormatError> {
    let mut lines = content_lines(text).peekable();
    if lines.peek().is_none() {
        return Ok(SweepSpec::default());
    }
    expect_magic(&mut lines, SWEEP_MAGIC, false)?;
    let mut spec = SweepSpec {
        events: SweepSpec::DEFAULT_EVENTS,
        ..Default::default()
    };
    let mut seen = std::collections::HashSet::new();
    for (n, line) in lines {
        let mut tokens = line.split_whitespace();
        let key = tokens.next().expect("content lines are non-empty");
        if !seen.insert(key) {
            return Err(FormatError::syntax(n, format!("`{key}` given twice")));
        }
        let values: Vec<&str> = tokens.collect();
        match key {
            "parallelism" => {
                spec.parallelism = values
                    .iter()
                    .map(|v| parse_num(n, "parallelism", v))
                    .collect::<Result<_, _>>()?
            }
            "memory" => {
                spec.memory = values
                    .iter()
                    .map(|v| {
                        v.parse()
                            .map_err(|e: crate::memory::UnknownMemType| FormatError::syntax(n, e.to_string()))
                    })
                    .collect::<Result<_, _>>()?
            }
            "clock_hz" => spec.clock_hz = values.iter().map(|v| parse_hz(n, v)).collect::<Result<_, _>>()?,
            "events" | "bank_bits" => {
                let [v] = values.as_slice() else {
                    return Err(FormatError::syntax(n, format!("`{key}` takes exactly one value")));
                };
                let v: usize = parse_num(n, key, v)?;
                if key == "events" {
                    spec.events = v;
                } else {
                    spec.bank_bits = Some(v);
                }
            }
            _ => return Err(FormatError::syntax(n, format!("unknown key `{key}`"))),
        }
    }
    Ok(spec)
}

pub fn sweep_to_string(spec: &SweepSpec) -> String {
    let join = |items: Vec<String>| items.join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{SWEEP_MAGIC}");
    let _ = writeln!(
        out,
        "parallelism {}",
        join(spec.parallelism.iter().map(|p| p.to_string()).collect())
    );
    let _ = writeln!(
        out,
        "memory {}",
        join(spec.memory.iter().map(|m| m.as_str().to_ascii_lowercase()).collect())
    );
    let _ = writeln!(
        out,
        "clock_hz {}",
        join(spec.clock_hz.iter().map(|f| f.to_string()).collect())
    );
    let _ = writeln!(out, "events {}", spec.events);
    if let Some(s) = spec.bank_bits {
        let _ = writeln!(out, "bank_bits {s}");
    }
    out
}
