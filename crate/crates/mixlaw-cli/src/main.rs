//! `mixlaw`: evaluate, invert, fit, and characterize scale-independent
//! mixing laws from the command line.
//!
//! Exit codes: 0 success/CONFORMS, 1 VIOLATES, 2 domain error,
//! 3 INCONCLUSIVE, 64 usage, 65 data format, 73 I/O.

mod commands;
mod config;
mod dataset;
mod descriptor;
mod errors;
mod num;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{
    cmd_check, cmd_fit, cmd_invert_archie, cmd_invert_fraction, cmd_invert_phase, cmd_mix,
    cmd_sweep, CheckArgs, FitArgs, InvertArchieArgs, InvertFractionArgs, InvertPhaseArgs, MixArgs,
    SweepArgs,
};
use config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "mixlaw",
    version,
    about = "Power-mean mixing laws: evaluate, invert, fit, characterize"
)]
struct Cli {
    /// TOML file supplying defaults per subcommand; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mix phase values into a bulk value at an exponent or through a generator.
    Mix(MixArgs),
    /// Solve the mixing law for a missing quantity.
    #[command(subcommand)]
    Invert(InvertCmd),
    /// Estimate the mixing exponent from a CSV of measured samples.
    Fit(FitArgs),
    /// Test whether a generator's mean commutes with a change of scale.
    Check(CheckArgs),
    /// Tabulate the mixture value along a swept variable into a CSV.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum InvertCmd {
    /// Recover the one unknown phase value from a measured mixture.
    Phase(InvertPhaseArgs),
    /// Recover the first fraction of a two-phase mixture.
    Fraction(InvertFractionArgs),
    /// Recover water saturation from bulk conductivity.
    #[command(name = "archie-sw")]
    ArchieSw(InvertArchieArgs),
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = Config::load(cli.config.as_deref()).and_then(|config| match cli.command {
        Command::Mix(args) => cmd_mix(args, &config),
        Command::Invert(InvertCmd::Phase(args)) => cmd_invert_phase(args, &config),
        Command::Invert(InvertCmd::Fraction(args)) => cmd_invert_fraction(args, &config),
        Command::Invert(InvertCmd::ArchieSw(args)) => cmd_invert_archie(args, &config),
        Command::Fit(args) => cmd_fit(args, &config),
        Command::Check(args) => cmd_check(args, &config),
        Command::Sweep(args) => cmd_sweep(args, &config),
    });
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            err.code()
        }
    }
}

fn main() {
    std::process::exit(run());
}
