//! `spdc`: coincidence spectra, fringes, waveplate scans, fibre delay curves
//! and Monte Carlo pseudo-data for the type-II down-conversion source.
//!
//! Exit codes: 0 success, 2 usage or config error, 3 domain or numeric
//! error, 4 insufficient statistics.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ScenarioConfig;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "spdc",
    version,
    about = "Type-II SPDC polarization-frequency simulator"
)]
struct Cli {
    /// Scenario file with `section.key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `mc.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the amplitude matrices on the grid as CSV.
    #[arg(long, global = true)]
    dump_state: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coincidence rate against the monochromator wavelength.
    Spectrum {
        /// Analyzer pair in degrees, e.g. `--theta 45,-45`. Repeatable.
        #[arg(long = "theta", value_parser = parse_pair, allow_hyphen_values = true)]
        thetas: Vec<(f64, f64)>,
    },
    /// Rate against the port-2 analyzer angle at a fixed wavelength.
    Fringe {
        #[arg(long, default_value_t = 1.0)]
        step_deg: f64,
    },
    /// Spectra behind a half-wave plate at several orientations.
    Hwpscan {
        #[arg(
            long = "alpha-deg",
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_values_t = [7.0, 17.0, 22.5]
        )]
        alphas: Vec<f64>,
    },
    /// Arrival-delay distribution behind a dispersive fibre.
    Fibre,
    /// Event-level simulation; emits the delay histogram.
    Mc {
        /// Also write the raw event stream as CSV.
        #[arg(long)]
        events: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected THETA1,THETA2 in degrees, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            ScenarioConfig::parse(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let (Some(seed), Some(mc)) = (cli.seed, cfg.mc.as_mut()) {
        mc.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    if let Some(path) = &cli.dump_state {
        commands::dump_state(&cfg, path)?;
    }
    let bytes = match &cli.cmd {
        Command::Spectrum { thetas } => commands::spectrum(&cfg, thetas)?,
        Command::Fringe { step_deg } => commands::fringe(&cfg, *step_deg)?,
        Command::Hwpscan { alphas } => commands::hwpscan(&cfg, alphas)?,
        Command::Fibre => commands::fibre(&cfg)?,
        Command::Mc { events } => commands::mc(&cfg, events.as_deref())?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spdc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
