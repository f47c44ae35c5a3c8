mod commands;
mod config;
mod error;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::SweepAxis;
use crate::config::{OutputArgs, RunArgs, RunConfig};
use crate::error::CliResult;
use crate::output::Report;
use crate::verify::{VerifyOptions, DEFAULT_POINTS, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "nhosc", version, about = "Non-Hermitian transformed harmonic oscillator toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frequencies, mode decomposition and basic consistency checks
    Analyze {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues of the triangular Fock truncation
    Spectrum {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Series coefficients and position-space samples
    Wavefunction {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every invariant over a seeded parameter sample
    Verify {
        #[command(flatten)]
        opts: VerifyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a (lambda, beta) grid in parallel
    Sweep {
        #[command(flatten)]
        opts: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Highest perturbation order checked
    #[arg(long, default_value_t = nhosc_core::perturbation::DEFAULT_ORDER)]
    orders: usize,
    /// Random parameter points in addition to the fixed ones
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = -0.8, allow_hyphen_values = true)]
    lambda_min: f64,
    #[arg(long, default_value_t = 0.8, allow_hyphen_values = true)]
    lambda_max: f64,
    #[arg(long, default_value_t = 5)]
    lambda_steps: usize,
    #[arg(long, default_value_t = -0.8, allow_hyphen_values = true)]
    beta_min: f64,
    #[arg(long, default_value_t = 0.8, allow_hyphen_values = true)]
    beta_max: f64,
    #[arg(long, default_value_t = 5)]
    beta_steps: usize,
    /// Level used for the correction and expectation columns
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = nhosc_core::perturbation::DEFAULT_ORDER)]
    order: usize,
}

enum Status {
    Ok,
    VerificationFailed,
}

fn emit(report: &Report, out: &OutputArgs) -> CliResult<()> {
    let path = out.path();
    if let Some(dir) = path.as_deref().and_then(|p| p.parent()) {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    for written in report.emit(out.format(), path.as_deref())? {
        eprintln!("wrote {}", written.display());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<Status> {
    match cli.command {
        Command::Analyze { run, out } => emit(&commands::analyze(&RunConfig::resolve(&run)?)?, &out)?,
        Command::Spectrum { run, out } => emit(&commands::spectrum(&RunConfig::resolve(&run)?)?, &out)?,
        Command::Wavefunction { run, out } => emit(&commands::wavefunction(&RunConfig::resolve(&run)?)?, &out)?,
        Command::Sweep { opts, out } => {
            let lambda = SweepAxis {
                min: opts.lambda_min,
                max: opts.lambda_max,
                steps: opts.lambda_steps,
            };
            let beta = SweepAxis {
                min: opts.beta_min,
                max: opts.beta_max,
                steps: opts.beta_steps,
            };
            emit(&commands::sweep(lambda, beta, opts.n, opts.order)?, &out)?;
        }
        Command::Verify { opts, out } => {
            let outcome = verify::verify(VerifyOptions {
                orders: opts.orders,
                points: opts.points,
                seed: opts.seed,
                inject_fault: opts.inject_fault,
            })?;
            emit(&outcome.report, &out)?;
            if !outcome.failures.is_empty() {
                for c in &outcome.failures {
                    eprintln!("FAIL {}: observed {:e}, expected {}", c.name, c.observed, c.expected());
                }
                return Ok(Status::VerificationFailed);
            }
        }
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are invalid input; --help and --version are not.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
