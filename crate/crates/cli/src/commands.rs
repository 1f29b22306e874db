use std::path::Path;

use anyhow::{anyhow, Context};

use thorsim::energy::{dse_sweep, SweepWorkload};
use thorsim::io::{load_events, load_network, load_sweep, read_text, write_text, NetworkConfig};
use thorsim::outputs::{design_report, execute_config};
use thorsim::validate::validate_against_reference;
use thorsim::workload::random_events;
use thorsim::{AerEvent, EnergyCoefficients};

use crate::{Common, DseArgs, Failure, Overrides, ReportArgs, RunArgs, ValidateArgs};

fn coefficients(path: Option<&Path>) -> anyhow::Result<EnergyCoefficients> {
    match path {
        None => Ok(EnergyCoefficients::qualitative_default()),
        Some(p) => {
            let text = read_text(p)?;
            EnergyCoefficients::from_toml_str(&text).with_context(|| format!("{}", p.display()))
        }
    }
}

fn load_config(path: &Path, overrides: &Overrides) -> anyhow::Result<NetworkConfig> {
    let mut config = load_network(path)?;
    if let Some(mode) = overrides.mode {
        config.timing.mode = mode;
    }
    if let Some(f) = overrides.frequency_hz {
        config.timing.f_clk_hz = f;
    }
    Ok(config)
}

fn events(common: &Common, n_neurons: usize, count: usize) -> anyhow::Result<Vec<AerEvent>> {
    let mut events = match &common.events {
        Some(path) => load_events(path, Some(n_neurons))?,
        None => Vec::new(),
    };
    events.extend(random_events(n_neurons, count, common.seed));
    Ok(events)
}

pub fn run(args: RunArgs) -> Result<(), Failure> {
    let config = load_config(&args.common.config, &args.overrides)?;
    let coeffs = coefficients(args.common.coefficients.as_deref())?;
    let events = events(&args.common, config.network.n_neurons(), args.count)?;
    let outputs = execute_config(&config, &events, &coeffs)?;
    outputs.write_to(&args.out)?;
    let trace = &outputs.trace;
    eprintln!(
        "{} events, {} SOPs, {} output spikes in {} cycles",
        trace.events_executed(),
        trace.sops,
        trace.output_spikes.len(),
        trace.total_cycles
    );
    Ok(())
}

pub fn validate(args: ValidateArgs) -> Result<(), Failure> {
    let overrides = Overrides {
        mode: None,
        frequency_hz: args.frequency_hz,
    };
    let config = load_config(&args.common.config, &overrides)?;
    let n = config.network.n_neurons();
    if let Some((pre, post)) = args.inject_fault {
        if pre >= n || post >= n {
            return Err(Failure::Usage(format!(
                "--inject-fault {pre}:{post} is outside a {n}-neuron network"
            )));
        }
    }
    let events = events(&args.common, n, args.count)?;
    let v = validate_against_reference(&config, &events, args.inject_fault)?;
    if let Some(fault) = &v.fault {
        eprintln!("both models stopped on the same fault: {fault}");
    }
    match v.divergence {
        None => {
            eprintln!(
                "bit-exact: {} events, {} output spikes, final neuron states and weights match",
                v.events_executed, v.output_spikes
            );
            Ok(())
        }
        Some(d) => Err(anyhow!("mismatch: {d}").into()),
    }
}

pub fn dse(args: DseArgs) -> Result<(), Failure> {
    let spec = load_sweep(&args.sweep)?;
    if spec.is_empty() {
        return Err(Failure::Usage(format!(
            "{}: the sweep lists no design points",
            args.sweep.display()
        )));
    }
    let config = load_network(&args.common.config)?;
    let coeffs = coefficients(args.common.coefficients.as_deref())?;
    let n = config.network.n_neurons();
    let events = if args.common.events.is_some() || args.count.is_some() {
        events(&args.common, n, args.count.unwrap_or(0))?
    } else {
        (0..spec.events).map(|i| AerEvent::Neuron { src: i % n }).collect()
    };
    let workload = SweepWorkload {
        network: config.network.clone(),
        events,
        bank_bits: spec.bank_bits.unwrap_or(config.bank_bits),
        overhead_cycles: config.timing.event_overhead_cycles,
    };
    let table = dse_sweep(&spec.parallelism, &spec.memory, &spec.clock_hz, &workload, &coeffs);
    let best = table
        .best()
        .ok_or_else(|| anyhow!("none of the {} design points could be evaluated", spec.point_count()))?;
    let summary = format!(
        "best: P={} {} at {} Hz, {:e} J/SOP, {:e} SOP/s, {:e} mm2",
        best.point.parallelism,
        best.point.mem_type,
        best.point.f_clk_hz,
        best.report.e_sop_j,
        best.report.throughput_sops,
        best.report.area_mm2
    );
    std::fs::create_dir_all(&args.out).with_context(|| format!("{}", args.out.display()))?;
    write_text(&args.out.join("sweep.csv"), &table.to_csv())?;
    write_text(&args.out.join("best.txt"), &format!("{summary}\n"))?;
    eprintln!(
        "{} points, {} skipped; {summary}",
        table.rows.len(),
        table.skipped.len()
    );
    Ok(())
}

pub fn report(args: ReportArgs) -> Result<(), Failure> {
    let config = load_config(&args.config, &args.overrides)?;
    let coeffs = coefficients(args.coefficients.as_deref())?;
    let report = design_report(&config, &coeffs)?;
    let mut json = serde_json::to_string_pretty(&report).context("serializing report")?;
    json.push('\n');
    std::fs::create_dir_all(&args.out).with_context(|| format!("{}", args.out.display()))?;
    write_text(&args.out.join("design.json"), &json)?;
    eprintln!(
        "area {:.4} mm2, peak {:.4e} SOP/s",
        report.area_mm2, report.peak_throughput_sops
    );
    Ok(())
}
