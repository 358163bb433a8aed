//! Behavioural tests for the bands / transform / compare subcommands,
//! driven through the real binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_latstab")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("latstab-sub-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn bands_chain_summary_gap() {
    let dir = workdir("bands");
    let config = dir.join("config.json");
    fs::write(
        &config,
        r#"{"geometry": "chain", "delta": 1.0, "mu": 0.5, "k_samples": 101}"#,
    )
    .unwrap();
    let out = run(&[
        "bands",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let summary = fs::read_to_string(dir.join("bands_summary.json")).unwrap();
    // gap = 2μ = 1.0 exactly (the Dirac point is sampled exactly)
    assert!(
        summary.contains("\"gap_ev\": 1.0000000000000000e0"),
        "{summary}"
    );

    let csv = fs::read_to_string(dir.join("bands.csv")).unwrap();
    assert!(csv.starts_with("s,kx,ky,band,energy_ev\n"));
    assert!(csv.contains(",upper,"));
    assert!(csv.contains(",lower,"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bands_honeycomb_gapless_at_k() {
    let dir = workdir("bands-hc");
    let config = dir.join("config.json");
    fs::write(
        &config,
        r#"{"geometry": "honeycomb", "delta": 1.0, "mu": 0.0, "k_samples": 60}"#,
    )
    .unwrap();
    let out = run(&[
        "bands",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = fs::read_to_string(dir.join("bands_summary.json")).unwrap();
    let gap: f64 = summary
        .lines()
        .find(|l| l.contains("\"gap_ev\""))
        .and_then(|l| l.split(':').nth(1))
        .map(|v| v.trim().trim_end_matches(',').parse().unwrap())
        .unwrap();
    assert!(gap.abs() < 1e-12, "{summary}");
    // bandwidth over the path is 2·3Δ at Γ
    assert!(
        summary.contains("\"bandwidth_ev\": 6.0000000000000000e0"),
        "{summary}"
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn transform_identity_boost_and_counts() {
    let dir = workdir("transform");
    let config = dir.join("rot0.json");
    fs::write(
        &config,
        r#"{"geometry": "chain", "delta": 1.0, "mu": 0.5, "transform": {"kind": "rotation", "parameter": 0.0}}"#,
    )
    .unwrap();
    let out = run(&[
        "transform",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("hermitian true"), "{stdout}");
    let json = fs::read_to_string(dir.join("transform.json")).unwrap();
    // identity rotation emits the bare nearest-neighbour table
    assert_eq!(json.matches("\"from\"").count(), 4);

    // a finite rotation adds second- and third-neighbour classes
    let config = dir.join("rot.json");
    fs::write(
        &config,
        r#"{"geometry": "honeycomb", "delta": 1.0, "mu": 0.5, "transform": {"kind": "rotation", "parameter": 0.3}}"#,
    )
    .unwrap();
    let out = run(&[
        "transform",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = fs::read_to_string(dir.join("transform.json")).unwrap();
    let distances: std::collections::BTreeSet<&str> = [
        "\"offset\": [1, 1]",
        "\"offset\": [0, 1]",
        "\"offset\": [0, 0]",
    ]
    .into_iter()
    .filter(|pat| json.contains(*pat))
    .collect();
    assert_eq!(distances.len(), 3, "{json}");

    // boost emits a non-hermitian table
    let config = dir.join("boost.json");
    fs::write(
        &config,
        r#"{"geometry": "chain", "delta": 1.0, "mu": 0.5, "transform": {"kind": "boost", "parameter": 1.0}}"#,
    )
    .unwrap();
    let out = run(&[
        "transform",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("hermitian false"), "{stdout}");

    // transform without a transform block is a usage error
    let config = dir.join("none.json");
    fs::write(&config, r#"{"geometry": "chain", "delta": 1.0}"#).unwrap();
    let out = run(&[
        "transform",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn compare_self_reference_and_missing_file() {
    let dir = workdir("compare");
    let model_json =
        r#"{"geometry": "honeycomb", "delta": 1.356, "mu": 0.895, "k_samples": 40{REST}}"#;

    // generate a reference from the model itself
    let config = dir.join("bands.json");
    fs::write(&config, model_json.replace("{REST}", "")).unwrap();
    let out = run(&[
        "bands",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let reference = dir.join("bands.csv");
    let config = dir.join("compare.json");
    fs::write(
        &config,
        model_json.replace(
            "{REST}",
            &format!(", \"reference\": \"{}\"", reference.to_str().unwrap()),
        ),
    )
    .unwrap();
    let out = run(&[
        "compare",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(dir.join("compare_report.json")).unwrap();
    assert!(
        report.contains("\"rms_ev\": 0.0000000000000000e0"),
        "{report}"
    );
    assert!(
        report.contains("\"gap_at_K_ev\": 1.7900000000000000e0"),
        "{report}"
    );

    // missing reference file is an input error
    let config = dir.join("missing.json");
    fs::write(
        &config,
        model_json.replace("{REST}", ", \"reference\": \"/nonexistent/ref.csv\""),
    )
    .unwrap();
    let out = run(&[
        "compare",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // schema violation reports the offending line
    let bad = dir.join("bad.csv");
    fs::write(
        &bad,
        "s,kx,ky,band,energy_ev\n0.0,0.0,0.0,upper,1.0\nnot,a,row\n",
    )
    .unwrap();
    let config = dir.join("badcmp.json");
    fs::write(
        &config,
        model_json.replace(
            "{REST}",
            &format!(", \"reference\": \"{}\"", bad.to_str().unwrap()),
        ),
    )
    .unwrap();
    let out = run(&[
        "compare",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "{stderr}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_honeycomb_open_boundary_config() {
    let dir = workdir("verify-open");
    let config = dir.join("config.json");
    fs::write(
        &config,
        r#"{"geometry": "honeycomb", "delta": 1.0, "mu": 0.4, "boundary": "open", "extent": [4, 4], "k_samples": 40}"#,
    )
    .unwrap();
    let out = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS open_boundary_bounds"), "{stdout}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn tolerance_flag_overrides_all() {
    let dir = workdir("tolflag");
    let config = dir.join("config.json");
    fs::write(
        &config,
        r#"{"geometry": "chain", "delta": 1.0, "mu": 0.5, "extent": [20], "k_samples": 40}"#,
    )
    .unwrap();
    // an absurdly tight global tolerance makes everything fail
    let out = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
        "--tolerance",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    fs::remove_dir_all(&dir).ok();
}
