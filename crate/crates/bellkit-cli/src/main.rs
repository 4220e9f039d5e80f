//! Command-line front end: simulate coincidence datasets, analyze them,
//! and fit the competing models.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use bellkit::io::{
    cmd_analyze, cmd_fit, cmd_simulate, parse_grid, read_config, FitModel, Generator,
    ScanReport, SimulateOpts, DEFAULT_GRID,
};
use bellkit::lhv::LhvParams;
use bellkit::stats::VerdictThresholds;

#[derive(Parser)]
#[command(author, version, about = "Two-channel coincidence toolkit", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Draw a synthetic dataset over an analyzer-angle grid
    Simulate(SimulateArgs),
    /// Run every estimator on a dataset and write a report directory
    Analyze(AnalyzeArgs),
    /// Fit the cosine and dead-zone models to one scan or all of them
    Fit(FitArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Setup file for the source model
    #[arg(long, value_name = "FILE", required_unless_present = "lhv", conflicts_with = "lhv")]
    config: Option<PathBuf>,

    /// Simulate the dead-zone model instead: visibility,efficiency
    #[arg(long, value_name = "V,ETA")]
    lhv: Option<String>,

    /// First-arm angles, either start:stop:step (inclusive) or a comma list
    #[arg(long, value_name = "GRID", default_value = DEFAULT_GRID)]
    alice: String,

    /// Second-arm angles, same syntax
    #[arg(long, value_name = "GRID", default_value = DEFAULT_GRID)]
    bob: String,

    /// Source emissions per setting
    #[arg(long, default_value_t = 100_000)]
    pairs: u64,

    /// Master seed; one seed reproduces the dataset byte for byte
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Draw each window's emission number from a Poisson law
    #[arg(long)]
    poisson_windows: bool,

    /// Where to write the dataset
    #[arg(short, long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Dataset to analyze
    data: PathBuf,

    /// Compatibility thresholds on the inferred efficiency: lhv1,lhv2
    #[arg(long, value_name = "ETA1,ETA2")]
    thresholds: Option<String>,

    /// Directory for report.csv and the per-scan plot files
    #[arg(long, value_name = "DIR", default_value = "report")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Dataset to fit
    data: PathBuf,

    /// Which model family: qm, lhv or both
    #[arg(long, default_value = "both", value_parser = parse_model)]
    model: FitModel,

    /// Restrict to one scan, e.g. `90` or `beta=90`
    #[arg(long, value_name = "BETA", value_parser = parse_scan)]
    scan: Option<f64>,
}

fn parse_model(s: &str) -> Result<FitModel, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_scan(s: &str) -> Result<f64, String> {
    let s = s.strip_prefix("beta=").unwrap_or(s);
    s.parse().map_err(|_| format!("invalid scan selector '{s}' (expected an angle)"))
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let err = || anyhow::anyhow!("{what} must be two comma-separated numbers, found '{s}'");
    if parts.len() != 2 {
        return Err(err());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| err())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| err())?;
    Ok((a, b))
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let generator = match &args.lhv {
        Some(spec) => {
            let (v_prime, eta) = parse_pair(spec, "--lhv")?;
            Generator::DeadZone(
                LhvParams::new(v_prime, eta).context("--lhv parameters are out of range")?,
            )
        }
        None => {
            let path = args.config.as_deref().expect("clap enforces --config without --lhv");
            Generator::Quantum(
                read_config(path)
                    .with_context(|| format!("reading setup file {}", path.display()))?,
            )
        }
    };
    let opts = SimulateOpts {
        generator,
        alice_deg: parse_grid(&args.alice).context("--alice")?,
        bob_deg: parse_grid(&args.bob).context("--bob")?,
        pairs_per_setting: args.pairs,
        seed: args.seed,
        poisson_windows: args.poisson_windows,
    };
    let rows = cmd_simulate(&opts, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {rows} settings to {} (seed {})", args.out.display(), args.seed);
    Ok(())
}

fn scan_line(scan: &ScanReport) -> String {
    let mut line = format!("scan beta={}:", scan.beta_deg);
    match &scan.nu {
        Some(nu) => {
            line.push_str(&format!(
                " nu = {:.6} +/- {:.6} ({:.2} sigma), eta* = {:.4}{}",
                nu.nu,
                nu.sigma_nu,
                nu.deviation_sigma,
                nu.eta_star,
                if nu.eta_star_capped { " (capped)" } else { "" },
            ));
        }
        None => line.push_str(" no composite statistic"),
    }
    let flags = scan.flags();
    if !flags.is_empty() {
        line.push_str(&format!(", verdicts: {}", flags.join(";")));
    }
    line
}

fn run_analyze(args: &AnalyzeArgs) -> Result<()> {
    let thresholds = match &args.thresholds {
        Some(spec) => {
            let (lhv1_eta, lhv2_eta) = parse_pair(spec, "--thresholds")?;
            VerdictThresholds { lhv1_eta, lhv2_eta }
        }
        None => VerdictThresholds::default(),
    };
    let bundle = cmd_analyze(&args.data, &thresholds, &args.out_dir)
        .with_context(|| format!("analyzing {}", args.data.display()))?;
    for scan in &bundle.scans {
        println!("{}", scan_line(scan));
        for warning in &scan.warnings {
            println!("  warning: {warning}");
        }
    }
    match (&bundle.nosignalling, &bundle.nosignalling_note) {
        (Some(ns), _) => println!(
            "no-signalling worst p = {:.4}{}",
            ns.worst_p,
            if ns.flagged { " (FLAGGED)" } else { "" }
        ),
        (None, Some(note)) => println!("no-signalling check unavailable: {note}"),
        (None, None) => {}
    }
    println!("report written to {}", args.out_dir.display());
    Ok(())
}

fn run_fit(args: &FitArgs) -> Result<()> {
    let text = cmd_fit(&args.data, args.model, args.scan)
        .with_context(|| format!("fitting {}", args.data.display()))?;
    print!("{text}");
    Ok(())
}

fn main() -> Result<()> {
    match &Cli::parse().command {
        Commands::Simulate(args) => run_simulate(args),
        Commands::Analyze(args) => run_analyze(args),
        Commands::Fit(args) => run_fit(args),
    }
}
