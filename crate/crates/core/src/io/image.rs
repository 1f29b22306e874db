use std::fmt::Write as _;

use super::{content_lines, expect_magic, parse_num, FormatError};
use crate::memory::{mem_geometry, MemGeometry, MemType, NeuronMemory, NeuronSlot, SynapseMemory};
use crate::neuron::{NeuronState, SynapseWeight, NEURON_STATE_BYTES};

pub const SYNAPSE_IMAGE_MAGIC: &str = "THORSIM v1 synapse-image";
pub const NEURON_IMAGE_MAGIC: &str = "THORSIM v1 neuron-image";

type Lines<'a> = std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>;

fn header_value(lines: &mut Lines<'_>, key: &'static str) -> Result<(usize, String), FormatError> {
    match lines.next() {
        Some((n, line)) => match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [k, v] if *k == key => Ok((n, v.to_string())),
            _ => Err(FormatError::syntax(n, format!("expected `{key} <value>`"))),
        },
        None => Err(FormatError::Missing(key)),
    }
}

fn header_num(lines: &mut Lines<'_>, key: &'static str) -> Result<usize, FormatError> {
    let (n, v) = header_value(lines, key)?;
    parse_num(n, key, &v)
}

fn hex_digits(line: usize, text: &str, expected: usize) -> Result<Vec<u8>, FormatError> {
    if text.len() != expected || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(FormatError::syntax(line, format!("expected {expected} hex digits")));
    }
    Ok(text
        .bytes()
        .map(|b| (b as char).to_digit(16).expect("checked") as u8)
        .collect())
}

/// One line per logical 4P-bit word, in address order `pre * (N/P) + group`.
/// Each line is the word in hex, most significant nibble first, so lane 0 is
/// the last digit.
pub fn synapse_image_to_string(memory: &SynapseMemory) -> String {
    let g = memory.geometry();
    let mut out = String::new();
    let _ = writeln!(out, "{SYNAPSE_IMAGE_MAGIC}");
    let _ = writeln!(out, "N {}", g.n);
    let _ = writeln!(out, "P {}", g.p);
    let _ = writeln!(out, "S {}", g.s);
    let _ = writeln!(out, "MEM {}", g.mem_type.as_str().to_ascii_lowercase());
    for word in memory.dump().chunks(g.p) {
        let line: String = word
            .iter()
            .rev()
            .map(|w| char::from_digit(w.get() as u32, 16).expect("nibble"))
            .collect();
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn parse_synapse_image(text: &str) -> Result<(MemGeometry, Vec<SynapseWeight>), FormatError> {
    let mut lines: Lines<'_> = (Box::new(content_lines(text)) as Box<dyn Iterator<Item = _>>).peekable();
    expect_magic(&mut lines, SYNAPSE_IMAGE_MAGIC, false)?;
    let n = header_num(&mut lines, "N")?;
    let p = header_num(&mut lines, "P")?;
    let s = header_num(&mut lines, "S")?;
    let (mem_line, mem) = header_value(&mut lines, "MEM")?;
    let mem_type: MemType = mem
        .parse()
        .map_err(|e: crate::memory::UnknownMemType| FormatError::syntax(mem_line, e.to_string()))?;
    let geometry = mem_geometry(n, p, s, mem_type).map_err(|e| FormatError::Constraint(e.to_string()))?;

    let words = n * n / p;
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..words {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Constraint(format!("synapse image ends after {i} of {words} words")))?;
        weights.extend(
            hex_digits(ln, line, p)?
                .into_iter()
                .rev()
                .map(SynapseWeight::from_nibble),
        );
    }
    if let Some((ln, _)) = lines.next() {
        return Err(FormatError::syntax(ln, "trailing data after the last word"));
    }
    Ok((geometry, weights))
}

/// Decoded neuron image, records in neuron-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronImage {
    pub n: usize,
    pub p: usize,
    pub states: Vec<NeuronState>,
}

/// Raw sub-bank contents: for each bank and sub-bank a `bank <b> sub <s>`
/// line followed by N/2P entry lines of P bytes in hex, lane 0 first.
pub fn neuron_image_to_string(memory: &NeuronMemory) -> String {
    let p = memory.parallelism();
    let mut out = String::new();
    let _ = writeln!(out, "{NEURON_IMAGE_MAGIC}");
    let _ = writeln!(out, "N {}", memory.n_neurons());
    let _ = writeln!(out, "P {p}");
    for bank in 0..2 {
        for sub in 0..NEURON_STATE_BYTES {
            let _ = writeln!(out, "bank {bank} sub {sub}");
            for entry in memory.sub_bank(bank, sub).chunks(p) {
                let line: String = entry.iter().map(|b| format!("{b:02x}")).collect();
                let _ = writeln!(out, "{line}");
            }
        }
    }
    out
}

pub fn parse_neuron_image(text: &str) -> Result<NeuronImage, FormatError> {
    let mut lines: Lines<'_> = (Box::new(content_lines(text)) as Box<dyn Iterator<Item = _>>).peekable();
    expect_magic(&mut lines, NEURON_IMAGE_MAGIC, false)?;
    let n = header_num(&mut lines, "N")?;
    let p = header_num(&mut lines, "P")?;
    crate::neuron::LifParams::new(n, p, false).map_err(|e| FormatError::Constraint(e.to_string()))?;

    let layout = NeuronMemory::new(n, p, false);
    let entries = layout.entries();
    let mut bytes = vec![[0u8; NEURON_STATE_BYTES]; n];
    for bank in 0..2 {
        #[allow(clippy::needless_range_loop)]
        for sub in 0..NEURON_STATE_BYTES {
            let (ln, line) = lines.next().ok_or(FormatError::Missing("bank"))?;
            if line
                .split_whitespace()
                .ne(["bank", &bank.to_string(), "sub", &sub.to_string()])
            {
                return Err(FormatError::syntax(ln, format!("expected `bank {bank} sub {sub}`")));
            }
            for entry in 0..entries {
                let (ln, line) = lines.next().ok_or_else(|| {
                    FormatError::Constraint(format!("bank {bank} sub {sub} ends after {entry} entries"))
                })?;
                let digits = hex_digits(ln, line, 2 * p)?;
                for (lane, pair) in digits.chunks(2).enumerate() {
                    let id = layout.neuron_id(NeuronSlot { bank, entry, lane });
                    bytes[id][sub] = pair[0] << 4 | pair[1];
                }
            }
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(FormatError::syntax(ln, "trailing data after the last entry"));
    }
    Ok(NeuronImage {
        n,
        p,
        states: bytes.into_iter().map(NeuronState::from_bytes).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuron::LifParams;
    use crate::workload::random_network;

    #[test]
    fn synapse_image_round_trip() {
        for (n, p, s, t) in [
            (8, 2, 64, MemType::Scm),
            (64, 8, 1024, MemType::Sram),
            (256, 32, 32768, MemType::Scm),
        ] {
            let net = random_network(LifParams::new(n, p, false).unwrap(), n as u64);
            let mut mem = SynapseMemory::new(mem_geometry(n, p, s, t).unwrap());
            mem.load(net.weights()).unwrap();
            let text = synapse_image_to_string(&mem);
            let (g, weights) = parse_synapse_image(&text).unwrap();
            assert_eq!(&g, mem.geometry());
            assert_eq!(weights, net.weights());
            assert_eq!(parse_synapse_image(&text.replace('\n', "\r\n")).unwrap().1, weights);
        }
    }

    #[test]
    fn synapse_lane_order() {
        let mut mem = SynapseMemory::new(mem_geometry(8, 4, 64, MemType::Scm).unwrap());
        let mut w = vec![SynapseWeight::ZERO; 64];
        w[0] = SynapseWeight::from_nibble(0xa);
        w[3] = SynapseWeight::from_nibble(0x5);
        mem.load(&w).unwrap();
        let text = synapse_image_to_string(&mem);
        assert_eq!(text.lines().nth(5), Some("500a"));
    }

    #[test]
    fn neuron_image_round_trip() {
        for (n, p) in [(8, 1), (8, 4), (256, 32)] {
            let net = random_network(LifParams::new(n, p, true).unwrap(), 5);
            let mut mem = NeuronMemory::new(n, p, true);
            mem.load(net.neurons()).unwrap();
            let text = neuron_image_to_string(&mem);
            let image = parse_neuron_image(&text).unwrap();
            assert_eq!((image.n, image.p), (n, p));
            assert_eq!(image.states, net.neurons());
        }
    }

    #[test]
    fn truncated_and_malformed_images() {
        let mut mem = SynapseMemory::new(mem_geometry(8, 2, 64, MemType::Scm).unwrap());
        mem.load(&[SynapseWeight::MAX; 64]).unwrap();
        let text = synapse_image_to_string(&mem);
        let cut: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_synapse_image(&cut), Err(FormatError::Constraint(_))));
        let bad = text.replacen("ff", "fz", 1);
        assert_eq!(parse_synapse_image(&bad).unwrap_err().line(), Some(6));
        let extra = text + "00\n";
        assert!(parse_synapse_image(&extra).is_err());
        assert!(parse_synapse_image("THORSIM v1 synapse-image\nN 8\nP 3\nS 64\nMEM scm\n").is_err());
    }
}
