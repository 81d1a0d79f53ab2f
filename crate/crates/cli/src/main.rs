#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::OutputFormat;
use error::CliError;
use output::Writer;

/// Noise budget, dynamics and sensitivity curves of a levitated ferromagnetic
/// torque magnetometer.
#[derive(Parser)]
#[command(name = "ferrotorque", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides output.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override a config value, e.g. --set sensor.radius_m=1e-3. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output format (overrides output.format).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print and save every derived sensor quantity.
    Derive,
    /// Noise amplitude spectral densities over a frequency grid.
    Spectrum,
    /// Subresonant noise floors versus sensor radius.
    RadiusSweep,
    /// Integrate the librational dynamics.
    Simulate,
    /// Projected bounds on the pseudoscalar spin-spin coupling.
    Exclusion,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FERROTORQUE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("FERROTORQUE_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {n} worker threads: {e}")))
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    configure_threads()?;
    let mut config = config::load(cli.config.as_deref(), &cli.set)?;
    if let Some(dir) = cli.out {
        config.output.directory = dir;
    }
    if let Some(f) = cli.format {
        config.output.format = f;
    }
    let mut out = Writer::new(&config.output.directory)?;
    match cli.command {
        Command::Derive => commands::cmd_derive(&config, &mut out)?,
        Command::Spectrum => commands::cmd_spectrum(&config, &mut out)?,
        Command::RadiusSweep => commands::cmd_radius_sweep(&config, &mut out)?,
        Command::Simulate => commands::cmd_simulate(&config, &mut out)?,
        Command::Exclusion => commands::cmd_exclusion(&config, &mut out)?,
    }
    Ok(out.written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(written) => {
            for p in written {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
