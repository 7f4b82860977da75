//! `qwpath`: time-averaged and stationary distributions of quantum walks on
//! the path, computed from the spectrum of the underlying birth-and-death chain.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Options;
use error::CliError;

const DEFAULT_OUT: &str = "qwpath-out";

#[derive(Debug, Parser)]
#[command(name = "qwpath", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// theorem, szegedy, spectral, cesaro or all.
    #[arg(long, global = true, value_name = "NAME")]
    method: Option<String>,

    /// Cesàro horizon T.
    #[arg(long, global = true, value_name = "T")]
    steps: Option<usize>,

    /// Ehrenfest urn size; without --config, also selects the Ehrenfest walk.
    #[arg(long = "N", global = true, value_name = "INT")]
    big_n: Option<usize>,

    /// Output directory (default: qwpath-out; selftest writes nothing unless given).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Seed for random instances.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Chain and walk spectra with eigenpair residuals.
    Spectrum,
    /// Limiting time-averaged distribution from |0,R>.
    Average,
    /// The stationary family with a direct-evolution check.
    Stationary,
    /// Exact Ehrenfest time average (--N).
    Ehrenfest,
    /// Cross-checks on seeded random instances.
    Selftest,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = match (&cli.out, cli.command) {
        (Some(dir), _) => dir.clone(),
        (None, Command::Selftest) => PathBuf::new(),
        (None, _) => PathBuf::from(DEFAULT_OUT),
    };
    let opts = Options {
        config: cli.config,
        method: cli.method,
        steps: cli.steps,
        big_n: cli.big_n,
        out,
        seed: cli.seed,
    };
    match cli.command {
        Command::Spectrum => commands::spectrum(&opts),
        Command::Average => commands::average(&opts),
        Command::Stationary => commands::stationary(&opts),
        Command::Ehrenfest => commands::ehrenfest(&opts),
        Command::Selftest => commands::selftest(&opts),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QWPATH_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwpath: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
