use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use openqec::commands::{cmd_critical_time, cmd_simulate, cmd_sweep, cmd_validate_codes, CommandOutcome};
use openqec::config::{parse_config, RunConfig};
use openqec::Error;

/// Fidelity of error-corrected qubit registers coupled to thermal baths.
#[derive(Parser)]
#[command(name = "openqec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration file (all keys optional).
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set temperature=10` or
    /// `--set sweep.kappa=[0.01,0.1]`. Repeatable; applied in order.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity versus time with and without error correction.
    Simulate(ConfigArgs),
    /// Cartesian parameter sweep, resumable from its CSV.
    Sweep(ConfigArgs),
    /// Crossover time κt_c of Werner inputs for each p and cycle count.
    CriticalTime(ConfigArgs),
    /// Brute-force check of the code tables.
    ValidateCodes(ConfigArgs),
}

const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::InvalidParameter { .. } | Error::Json(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&ConfigArgs, fn(&RunConfig) -> openqec::Result<CommandOutcome>) = match &cli.command {
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Sweep(a) => (a, cmd_sweep),
        Command::CriticalTime(a) => (a, cmd_critical_time),
        Command::ValidateCodes(a) => (a, cmd_validate_codes),
    };
    let cfg = match parse_config(args.config.as_deref(), &args.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("openqec: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cfg) {
        Ok(out) => {
            println!("{}", out.summary.trim_end());
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_DOMAIN)
            }
        }
        Err(e) => {
            eprintln!("openqec: {e}");
            ExitCode::from(if is_usage_error(&e) { EXIT_USAGE } else { EXIT_DOMAIN })
        }
    }
}
