//! Versioned text formats: network configurations, memory images, event
//! streams, run traces, spike logs and sweep specifications.
//!
//! Every format starts with a `THORSIM v1 <kind>` line. `#` starts a comment,
//! blank lines are ignored, and LF and CRLF line endings are both accepted.

mod events;
mod image;
mod network;
mod sweep;
mod trace;

use std::path::Path;

use thiserror::Error;

use crate::error::Error;

pub use events::{events_to_string, parse_events, EVENTS_MAGIC};
pub use image::{
    neuron_image_to_string, parse_neuron_image, parse_synapse_image, synapse_image_to_string, NeuronImage,
    NEURON_IMAGE_MAGIC, SYNAPSE_IMAGE_MAGIC,
};
pub use network::{network_to_string, parse_network, NetworkConfig, NETWORK_MAGIC};
pub use sweep::{parse_sweep, sweep_to_string, SweepSpec, SWEEP_MAGIC};
pub use trace::{
    parse_spike_log, parse_trace_csv, spike_log_to_string, trace_to_csv, ParsedTrace, TraceSummary, SPIKES_MAGIC,
    TRACE_MAGIC,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line `{expected}`")]
    Magic { expected: &'static str },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("constraint violated: {0}")]
    Constraint(String),
}

impl FormatError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        FormatError::Syntax {
            line,
            message: message.into(),
        }
    }

    /// Line number, for errors tied to one line.
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Syntax { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Non-blank lines with comments and line terminators removed, paired with
/// their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Consumes the magic line. With `optional`, a missing magic is accepted
/// and the first line is left in place.
pub(crate) fn expect_magic<'a, I>(
    lines: &mut std::iter::Peekable<I>,
    magic: &'static str,
    optional: bool,
) -> Result<(), FormatError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    match lines.peek() {
        Some(&(_, line)) if line.split_whitespace().eq(magic.split_whitespace()) => {
            lines.next();
            Ok(())
        }
        Some(&(n, line)) if line.starts_with("THORSIM") => Err(FormatError::syntax(
            n,
            format!("expected header `{magic}`, found `{line}`"),
        )),
        _ if optional => Ok(()),
        _ => Err(FormatError::Magic { expected: magic }),
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T, FormatError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FormatError::syntax(
            line,
            format!("{what}: expected a decimal number, found `{token}`"),
        ));
    }
    token
        .parse()
        .map_err(|_| FormatError::syntax(line, format!("{what}: `{token}` does not fit")))
}

pub(crate) fn parse_hz(line: usize, token: &str) -> Result<f64, FormatError> {
    let numeric = !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit() || b"eE.+-".contains(&b));
    match token.parse::<f64>() {
        Ok(f) if numeric && f.is_finite() && f > 0.0 => Ok(f),
        _ => Err(FormatError::syntax(
            line,
            format!("clock frequency: expected a positive number of Hz, found `{token}`"),
        )),
    }
}

pub fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_network(path: &Path) -> Result<NetworkConfig, Error> {
    Ok(parse_network(&read_text(path)?)?)
}

pub fn save_network(config: &NetworkConfig, path: &Path) -> Result<(), Error> {
    write_text(path, &network_to_string(config))
}

/// Reads an event stream, range-checking ids against `n_neurons`.
pub fn load_events(path: &Path, n_neurons: Option<usize>) -> Result<Vec<crate::event::AerEvent>, Error> {
    Ok(parse_events(&read_text(path)?, n_neurons)?)
}

pub fn load_sweep(path: &Path) -> Result<SweepSpec, Error> {
    Ok(parse_sweep(&read_text(path)?)?)
}

pub fn write_trace(trace: &crate::pipeline::RunTrace, path: &Path) -> Result<(), Error> {
    write_text(path, &trace_to_csv(trace))
}

pub fn write_spike_log(spikes: &[crate::event::OutputSpike], path: &Path) -> Result<(), Error> {
    write_text(path, &spike_log_to_string(spikes))
}
