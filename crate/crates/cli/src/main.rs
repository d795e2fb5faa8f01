mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zchms_core::drmetrics::NetPowerBasis;
use zchms_core::scenario::FlexMode;
use zchms_core::sf_flex::SurrogateKind;

/// Scheduling and demand-response analysis for a hydrogen direct-reduction plant.
#[derive(Debug, Parser)]
#[command(name = "zchms", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the furnace transition time constant to a trajectory.
    Identify(IdentifyArgs),
    /// Solve one flexibility mode and write its dispatch.
    Schedule(ScheduleArgs),
    /// Solve every mode and write the comparison table and DR report.
    Compare(CompareArgs),
    /// Generate a synthetic scenario.
    Synth(SynthArgs),
    /// Rebuild the comparison table from previously written solutions.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioSource {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "seed")]
    pub config: Option<PathBuf>,
    /// Use the synthetic scenario with this seed instead of a file.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Horizon of the synthetic scenario, hours.
    #[arg(long, value_name = "T", default_value_t = 24, requires = "seed")]
    pub horizon: usize,
}

#[derive(Debug, Args)]
pub struct IdentifyArgs {
    /// Trajectory CSV (`step,qss_tph,dis_tph[,met_rate]`).
    #[arg(long, value_name = "PATH", conflicts_with = "synthetic", required_unless_present = "synthetic")]
    pub trajectory: Option<PathBuf>,
    /// Simulate a surrogate furnace instead of reading a file.
    #[arg(long, value_name = "KIND")]
    pub synthetic: Option<SurrogateKind>,
    /// Time constant of the surrogate, hours.
    #[arg(long, value_name = "H", default_value_t = 1.27)]
    pub t_true: f64,
    /// Setpoint step of the surrogate experiment, t/h.
    #[arg(long, value_name = "A:B", default_value = "30:125", value_parser = parse_step)]
    pub step: (f64, f64),
    /// Extra steps to hold the new setpoint.
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub hold: usize,
    /// Scenario whose furnace parameters are used.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[command(flatten)]
    pub source: ScenarioSource,
    #[arg(long, value_name = "MODE")]
    pub mode: FlexMode,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub source: ScenarioSource,
    /// Cross-check every mode against the enumeration oracle (horizon <= 4).
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_name = "BASIS", default_value = "grid-exchange")]
    pub power_basis: NetPowerBasis,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_name = "T", default_value_t = 24)]
    pub horizon: usize,
    #[arg(long, value_name = "MODE", default_value = "baseline")]
    pub mode: FlexMode,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory holding `summary_<mode>.json` and `dispatch_<mode>.csv`.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_name = "BASIS", default_value = "grid-exchange")]
    pub power_basis: NetPowerBasis,
}

fn parse_step(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match commands::run(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = e.hint() {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
