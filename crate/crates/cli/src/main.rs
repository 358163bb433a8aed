//! latstab: build tight-binding Dirac models, apply stabilizer-group
//! deformations, and verify the invariants from the command line.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 usage or input
//! error. Outputs are deterministic: identical configs produce byte-
//! identical files (fixed 17-significant-digit float formatting, fixed
//! iteration orders, randomness seeded from the config through SplitMix64).

mod config;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use latstab::lattice::{dirac_points, BandStructure};
use latstab::monolayer::{
    band_comparison, band_comparison_transformed, bands_to_csv, sample_bands, ReferenceBands,
};
use latstab::serialize::fmt_f64;
use latstab::stabilizer::{boosted_couplings, rotated_couplings, TransformedModel};
use latstab::DataError;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "latstab",
    version,
    about = "Dirac tight-binding lattices and their stabilizer deformations"
)]
struct Cli {
    /// Path to the JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for generated files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Override every verification tolerance with this value.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the band structure along the geometry's k-path.
    Bands,
    /// Emit the deformed coupling table for the configured transform.
    Transform,
    /// Run the invariant verification suite.
    Verify,
    /// Compare model bands against a reference CSV.
    Compare,
}

enum AppError {
    /// Bad usage or bad input: exit code 2.
    Usage(String),
    /// A verification check failed: exit code 1.
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(AppError::CheckFailed) => ExitCode::from(1),
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let config = load_config(cli)?;
    let model = config.model().map_err(AppError::Usage)?;
    fs::create_dir_all(&cli.out)
        .map_err(|e| AppError::Usage(format!("cannot create output directory: {e}")))?;

    match cli.command {
        Command::Bands => cmd_bands(cli, &config),
        Command::Transform => cmd_transform(cli, &config),
        Command::Verify => {
            let checks =
                verify::run_checks(&config, &model, cli.tolerance).map_err(AppError::Usage)?;
            for c in &checks {
                println!(
                    "{} {} residual {:.3e} (tolerance {:.3e})",
                    if c.pass() { "PASS" } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.tolerance
                );
            }
            let report = verify::report_json(&config, &checks);
            write_file(&cli.out.join("verify_report.json"), &report)?;
            if checks.iter().all(verify::CheckResult::pass) {
                Ok(())
            } else {
                Err(AppError::CheckFailed)
            }
        }
        Command::Compare => cmd_compare(cli, &config),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, AppError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| AppError::Usage("--config <path> is required".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| AppError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn transformed(config: &RunConfig) -> Result<Option<TransformedModel>, AppError> {
    let model = config.model().map_err(AppError::Usage)?;
    match config.transform.as_ref() {
        None => Ok(None),
        Some(t) => match t.kind.as_str() {
            "rotation" => Ok(Some(rotated_couplings(&model, t.parameter))),
            "boost" => Ok(Some(boosted_couplings(&model, t.parameter))),
            "none" => Ok(None),
            other => Err(AppError::Usage(format!(
                "unknown transform kind '{other}' (rotation|boost|none)"
            ))),
        },
    }
}

fn cmd_bands(cli: &Cli, config: &RunConfig) -> Result<(), AppError> {
    let model = config.model().map_err(AppError::Usage)?;
    let mut bands =
        sample_bands(&model, config.k_samples).map_err(|e| AppError::Usage(e.to_string()))?;

    // With a transform configured, route the energies through the deformed
    // coupling table; they must agree with the base dispersion.
    if let Some(tm) = transformed(config)? {
        let mut routed = BandStructure::default();
        for s in &bands.samples {
            let (ep, em) = tm.band_pair(s.k);
            routed.push(s.k, s.s, s.label.clone(), ep, em);
        }
        bands = routed;
    }

    write_file(&cli.out.join("bands.csv"), &bands_to_csv(&bands))?;

    let gap = bands.min_gap();
    let bandwidth = bands.bandwidth();
    let mut summary = String::from("{\n");
    summary.push_str(&format!("  \"geometry\": \"{}\",\n", config.geometry));
    summary.push_str(&format!("  \"n_samples\": {},\n", bands.samples.len()));
    summary.push_str(&format!("  \"gap_ev\": {},\n", fmt_f64(gap)));
    summary.push_str(&format!("  \"bandwidth_ev\": {},\n", fmt_f64(bandwidth)));
    summary.push_str("  \"dirac_points\": [");
    let points = dirac_points(&model);
    for (i, kd) in points.iter().enumerate() {
        let sep = if i + 1 == points.len() { "" } else { ", " };
        summary.push_str(&format!("[{}, {}]{}", fmt_f64(kd[0]), fmt_f64(kd[1]), sep));
    }
    summary.push_str("]\n}\n");
    write_file(&cli.out.join("bands_summary.json"), &summary)?;

    println!(
        "bands: {} samples, gap {} eV, bandwidth {} eV",
        bands.samples.len(),
        fmt_f64(gap),
        fmt_f64(bandwidth)
    );
    Ok(())
}

fn cmd_transform(cli: &Cli, config: &RunConfig) -> Result<(), AppError> {
    let tm = transformed(config)?.ok_or_else(|| {
        AppError::Usage("transform requires \"transform\": {\"kind\": rotation|boost, ...}".into())
    })?;
    write_file(&cli.out.join("transform.json"), &tm.to_json())?;
    println!(
        "transform: kind {} parameter {} hermitian {}",
        tm.kind.as_str(),
        fmt_f64(tm.kind.parameter()),
        tm.couplings.is_hermitian(latstab::ALG_TOL)
    );
    println!(
        "max second-neighbour amplitude {} eV, max third-neighbour amplitude {} eV",
        fmt_f64(tm.couplings.max_amplitude_in_class(2)),
        fmt_f64(tm.couplings.max_amplitude_in_class(3))
    );
    Ok(())
}

fn cmd_compare(cli: &Cli, config: &RunConfig) -> Result<(), AppError> {
    let model = config.model().map_err(AppError::Usage)?;
    let path = config
        .reference
        .as_ref()
        .ok_or_else(|| AppError::Usage("compare requires \"reference\": <csv path>".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read reference {path}: {e}")))?;
    let reference = ReferenceBands::from_csv(&text)
        .map_err(|e| match e {
            DataError::Csv { line, message } => {
                AppError::Usage(format!("{path}: line {line}: {message}"))
            }
            other => AppError::Usage(format!("{path}: {other}")),
        })?
        .with_window(config.window.unwrap_or([0.0, 1.0]));
    let fit_e0 = config.fit_e0.unwrap_or(true);

    let report = match transformed(config)? {
        Some(tm) => band_comparison_transformed(&tm, &reference, fit_e0),
        None => band_comparison(&model, &reference, fit_e0),
    }
    .map_err(|e| AppError::Usage(e.to_string()))?;

    write_file(&cli.out.join("compare_report.json"), &report.to_json())?;
    println!(
        "compare: rms upper {} eV, rms lower {} eV, gap at K {} eV, {} samples excluded",
        fmt_f64(report.upper.rms_ev),
        fmt_f64(report.lower.rms_ev),
        fmt_f64(report.gap_at_k_ev),
        report.n_excluded
    );
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    fs::write(path, contents)
        .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}
