use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn thorsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thorsim"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .display()
        .to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_three_identical_files_twice() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = thorsim(&[
            "run",
            "--config",
            &config("default-network.txt"),
            "--events",
            &config("sample-events.txt"),
            "--count",
            "300",
            "--seed",
            "9",
            "--out",
            path(out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for file in ["trace.csv", "spikes.txt", "energy.json"] {
        let x = std::fs::read(a.join(file)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, std::fs::read(b.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn seed_changes_generated_events() {
    let dir = tempfile::tempdir().unwrap();
    let mut traces = Vec::new();
    for seed in ["1", "2"] {
        let out = dir.path().join(seed);
        let o = thorsim(&[
            "run",
            "--config",
            &config("tiny-network.txt"),
            "--count",
            "200",
            "--seed",
            seed,
            "--out",
            path(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        traces.push(std::fs::read_to_string(out.join("trace.csv")).unwrap());
    }
    assert_ne!(traces[0], traces[1]);
}

#[test]
fn baseline_run_records_missing_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let o = thorsim(&[
        "run",
        "--config",
        &config("tiny-network.txt"),
        "--count",
        "50",
        "--mode",
        "baseline",
        "--out",
        path(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = std::fs::read_to_string(dir.path().join("energy.json")).unwrap();
    assert!(json.contains("\"mode\": \"baseline\""));
    assert!(json.contains("\"estimate\": null"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(thorsim(&["run", "--out", path(dir.path())]).status.code(), Some(2));
    assert_eq!(
        thorsim(&["dse", "--config", &config("tiny-network.txt")]).status.code(),
        Some(2)
    );
    let o = thorsim(&[
        "run",
        "--config",
        &config("tiny-network.txt"),
        "--frequency-hz",
        "-5",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = thorsim(&[
        "run",
        "--config",
        &config("tiny-network.txt"),
        "--mode",
        "fast",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let empty = dir.path().join("empty-sweep.txt");
    std::fs::write(&empty, "# no points\n").unwrap();
    let o = thorsim(&[
        "dse",
        "--config",
        &config("tiny-network.txt"),
        "--sweep",
        path(&empty),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    let o = thorsim(&["run", "--config", path(&missing), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nope.txt"));

    let bad = dir.path().join("bad-events.txt");
    std::fs::write(&bad, "NEUR 1\nNEUR 99\n").unwrap();
    let o = thorsim(&[
        "run",
        "--config",
        &config("tiny-network.txt"),
        "--events",
        path(&bad),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn validate_exit_codes() {
    let default = config("default-network.txt");
    let o = thorsim(&["validate", "--config", &default, "--count", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        thorsim(&["validate", "--config", &default, "--count", "0"])
            .status
            .code(),
        Some(0)
    );

    let o = thorsim(&[
        "validate",
        "--config",
        &config("tiny-network.txt"),
        "--count",
        "100",
        "--inject-fault",
        "5:6",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("weight 5 -> 6"), "{}", stderr(&o));
    let o = thorsim(&[
        "validate",
        "--config",
        &config("tiny-network.txt"),
        "--inject-fault",
        "8:0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dse_selects_wide_scm_and_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = thorsim(&[
        "dse",
        "--config",
        &config("default-network.txt"),
        "--sweep",
        &config("parallelism-sweep.txt"),
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let best = std::fs::read_to_string(out.join("best.txt")).unwrap();
    assert!(best.starts_with("best: P=32 SCM at 400000000 Hz"), "{best}");
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 18);

    let single = dir.path().join("single.txt");
    std::fs::write(&single, "THORSIM v1 sweep\nparallelism 32\nmemory scm\nclock_hz 4e8\n").unwrap();
    let args = [
        "--config",
        &config("default-network.txt"),
        "--events",
        &config("sample-events.txt"),
    ];
    let o = thorsim(&[&["dse"][..], &args, &["--sweep", path(&single), "--out", path(&out)]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let row = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let e_sop_dse: f64 = row.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();

    let run_out = dir.path().join("run");
    let o = thorsim(&[&["run"][..], &args, &["--out", path(&run_out)]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let json = std::fs::read_to_string(run_out.join("energy.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let e_sop_run = value["estimate"]["e_sop_j"].as_f64().unwrap();
    assert_eq!(e_sop_dse, e_sop_run);
}

#[test]
fn dse_with_no_valid_point_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("invalid.txt");
    std::fs::write(
        &spec,
        "THORSIM v1 sweep\nparallelism 3 1024\nmemory scm\nclock_hz 1e8\n",
    )
    .unwrap();
    let o = thorsim(&[
        "dse",
        "--config",
        &config("tiny-network.txt"),
        "--sweep",
        path(&spec),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn report_writes_design_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = thorsim(&[
        "report",
        "--config",
        &config("default-network.txt"),
        "--out",
        path(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = std::fs::read_to_string(dir.path().join("design.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["neuron_event_cycles"], 13);
    assert!((v["area_mm2"].as_f64().unwrap() - 0.77).abs() < 1e-9);

    let toml = dir.path().join("coeffs.toml");
    let text = std::fs::read_to_string(config("qualitative-default.toml")).unwrap();
    std::fs::write(
        &toml,
        text.replace("fixed_area_mm2 = 0.0308", "fixed_area_mm2 = 1.0308"),
    )
    .unwrap();
    let o = thorsim(&[
        "report",
        "--config",
        &config("default-network.txt"),
        "--coefficients",
        path(&toml),
        "--out",
        path(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("design.json")).unwrap()).unwrap();
    assert!((v["area_mm2"].as_f64().unwrap() - 1.77).abs() < 1e-9);
}
