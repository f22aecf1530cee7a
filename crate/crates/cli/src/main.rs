use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gaussmac::model::SourceParams;
use gaussmac_cli::config::{parse_config, resolve, SimOptions, SEED_ENV};
use gaussmac_cli::sweep::{run_sweep, write_sweep, Column, Scale, SweepSpec, ALL_COLUMNS};
use gaussmac_cli::{rd, simulate, verify, CliError, Result};

/// Correlated Gaussian sources over a Gaussian multiple-access channel.
#[derive(Debug, Parser)]
#[command(name = "gaussmac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetric distortion bounds over a range of P/N (values are D/sigma^2)
    Sweep(SweepArgs),
    /// Monte-Carlo simulation of one scheme
    Simulate(SimulateArgs),
    /// Run the self-verification suite
    Verify(VerifyArgs),
    /// Rate-distortion function at one distortion pair
    Rd(RdArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.1)]
    snr_min: f64,
    #[arg(long, default_value_t = 3.0)]
    snr_max: f64,
    #[arg(long, default_value_t = 30)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    scale: Scale,
    /// Comma-separated subset of columns; all by default
    #[arg(long, value_enum, value_delimiter = ',')]
    schemes: Vec<Column>,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// key = value configuration file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    opts: SimOptions,
    /// Write the summary here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one row per trial to this file
    #[arg(long)]
    per_trial: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RdArgs {
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long)]
    d1: f64,
    #[arg(long)]
    d2: f64,
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(a) => {
            let plan = SweepSpec {
                rho: a.rho,
                sigma2: a.sigma2,
                snr_min: a.snr_min,
                snr_max: a.snr_max,
                points: a.points,
                scale: a.scale,
                columns: if a.schemes.is_empty() {
                    ALL_COLUMNS.to_vec()
                } else {
                    a.schemes
                },
            };
            let rows = run_sweep(&plan)?;
            write_sweep(&rows, sink(a.out.as_ref())?)
        }
        Command::Simulate(a) => {
            let file = match &a.config {
                Some(p) => parse_config(&std::fs::read_to_string(p)?, &p.display().to_string())?,
                None => SimOptions::default(),
            };
            let flag_seed = a.opts.seed.is_some();
            let opts = file.overlay(a.opts);
            let env_seed = std::env::var(SEED_ENV).ok();
            let settings = resolve(&opts, env_seed.as_deref(), flag_seed)?;
            let out = simulate::run_simulate(&settings)?;
            if out.reference.rates_feasible == Some(false) {
                eprintln!("warning: the configured rates violate the channel constraints");
            }
            if let Some(p) = &a.per_trial {
                simulate::write_trials(&out.run, BufWriter::new(File::create(p)?))?;
            }
            simulate::write_summary(&out, sink(a.out.as_ref())?)
        }
        Command::Verify(a) => {
            let results = verify::run_verify();
            verify::write_report(&results, sink(a.out.as_ref())?)?;
            match results.iter().filter(|r| !r.passed()).count() {
                0 => Ok(()),
                failed => Err(CliError::VerificationFailed(failed)),
            }
        }
        Command::Rd(a) => {
            let src = SourceParams::new(a.sigma2, a.rho)?;
            rd::write_rd(&src, a.d1, a.d2, sink(None)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
