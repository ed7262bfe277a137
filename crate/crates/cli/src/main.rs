use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use risradar::report::run_report;
use risradar::scenario::{ModeName, Scenario};
use risradar::studies::{
    echo_scenario, obtain_peak, run_interference_sweep, run_multinotch_study, run_pattern_study,
    train_peak,
};

#[derive(Parser)]
#[command(
    name = "risradar",
    version,
    about = "RIS beampattern synthesis and OFDM radar interference studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file; built-in defaults are used when omitted.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of points on the [0, π] angle grid.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Evaluate patterns at the carrier wavelength only.
    #[arg(long, global = true, conflicts_with = "all_subcarriers")]
    carrier_only: bool,
    /// Evaluate patterns at every subcarrier wavelength.
    #[arg(long, global = true)]
    all_subcarriers: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Peak, notch, and combined power patterns.
    Pattern,
    /// Train the peak-synthesis network and store its configuration.
    TrainPeak,
    /// Range-error sweep over interference power and angle offset.
    Sweep,
    /// Multi-notch patterns, suppression metrics, and sweeps per spacing.
    Multinotch,
    /// Summarize the studies found in the output directory.
    Report,
}

impl Common {
    fn resolve(&self) -> Result<Scenario> {
        let mut s = match &self.scenario {
            Some(path) => Scenario::load(path)?,
            None => Scenario::default(),
        };
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(out) = &self.out {
            s.output_dir = out.clone();
        }
        if let Some(points) = self.grid {
            s.angles.grid_points = points;
        }
        if self.carrier_only {
            s.mode = ModeName::CarrierOnly;
        }
        if self.all_subcarriers {
            s.mode = ModeName::AllSubcarriers;
        }
        s.validate()?;
        Ok(s)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let s = cli.common.resolve().context("resolving the scenario")?;
    let out = s.output_dir.clone();
    if !matches!(cli.command, Command::Report) {
        echo_scenario(&s, &out)?;
    }
    match cli.command {
        Command::TrainPeak => {
            let (_, summary) = train_peak(&s, &out)?;
            println!(
                "gain ratio {:.4}; wrote {}",
                summary.gain_ratio,
                summary.config_file.display()
            );
        }
        Command::Pattern => {
            let peak = obtain_peak(&s, &out)?;
            let summary = run_pattern_study(&s, &peak, &out)?;
            println!(
                "combined argmax {:.2} deg, {:.1} dB at the interferer",
                summary.combined_argmax_deg, summary.combined_db_at_interferer
            );
        }
        Command::Sweep => {
            let peak = obtain_peak(&s, &out)?;
            let summary = run_interference_sweep(&s, &peak, &out)?;
            println!("wrote {}", summary.sweep_file.display());
        }
        Command::Multinotch => {
            let peak = obtain_peak(&s, &out)?;
            let summary = run_multinotch_study(&s, &peak, &out)?;
            println!("wrote {}", summary.table_file.display());
        }
        Command::Report => {
            let outcome = run_report(&out)?;
            println!("{}", std::fs::read_to_string(&outcome.path)?);
            if outcome.studies == 0 {
                return Ok(ExitCode::from(2));
            }
            if !outcome.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
