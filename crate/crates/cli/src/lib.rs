//! `oscsym` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 computational error,
//! 3 tolerance or invariant failure.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use crate::config::{Command, Resolved, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_COMPUTE: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "oscsym",
    version,
    about = "Spectra and symmetries of oscillator chains with imaginary coupling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// JSON config file; flags given on the command line take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub opts: RunConfig,
}

fn resolve(cli: Cli) -> anyhow::Result<Resolved> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        command: cli.command,
        ..cli.opts
    };
    file.overlay(flags).resolve()
}

fn execute(cfg: &Resolved) -> anyhow::Result<report::Report> {
    match cfg.command {
        Command::Spectrum => commands::spectrum(cfg),
        Command::Fock => commands::fock(cfg),
        Command::Symmetry => commands::symmetry(cfg),
        Command::Perturb => commands::perturb(cfg),
        Command::Scan => commands::scan(cfg),
        Command::Verify => verify::run(cfg),
    }
}

fn emit(bytes: &[u8], cfg: &Resolved) -> anyhow::Result<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let cfg = match resolve(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_COMPUTE;
        }
    };
    if let Err(e) = report::render(&report, &cfg).and_then(|bytes| emit(&bytes, &cfg)) {
        eprintln!("error: {e:#}");
        return EXIT_COMPUTE;
    }
    if report.passed {
        EXIT_OK
    } else {
        eprintln!(
            "{}: {}",
            cfg.command,
            report.failure.as_deref().unwrap_or("check failed")
        );
        EXIT_TOLERANCE
    }
}
