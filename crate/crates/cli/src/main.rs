use anyhow::Result;
use clap::{Parser, Subcommand};
use fracbvp_cli::{cmd_check, cmd_example41, cmd_identities, cmd_solve, ExitStatus, RunConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fracbvp", version, about = "Existence certificates and solves for fractional p-Laplacian BVPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses and the existence certificate.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve the integral equation by Picard iteration.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Compare against the direct solve (p = 2, affine f only).
        #[arg(long)]
        oracle: bool,
        /// CSV output path, overriding the config.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the fractional-identity and kernel-bound suites.
    Identities {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Reproduce the constants of the worked example.
    Example41,
}

fn emit(report: &str, path: Option<&Path>) -> Result<()> {
    print!("{report}");
    if let Some(p) = path {
        std::fs::write(p, report)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitStatus> {
    match cli.command {
        Command::Check { config } => {
            let cfg = RunConfig::load(&config)?;
            let outcome = cmd_check(&cfg)?;
            emit(&outcome.report, cfg.outputs.report_path.as_deref())?;
            Ok(outcome.status)
        }
        Command::Solve { config, oracle, csv } => {
            let cfg = RunConfig::load(&config)?;
            let outcome = cmd_solve(&cfg, oracle, csv)?;
            emit(&outcome.report, cfg.outputs.report_path.as_deref())?;
            Ok(outcome.status)
        }
        Command::Identities { config } => {
            let cfg = config.as_deref().map(RunConfig::load).transpose()?;
            let outcome = cmd_identities(cfg.as_ref())?;
            emit(&outcome.report, cfg.as_ref().and_then(|c| c.outputs.report_path.as_deref()))?;
            Ok(outcome.status)
        }
        Command::Example41 => {
            let outcome = cmd_example41()?;
            emit(&outcome.report, None)?;
            Ok(ExitStatus::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let status = match e.downcast_ref::<fracbvp::Error>() {
                Some(fracbvp::Error::HypothesisH1 { .. }) => ExitStatus::HypothesisFailure,
                _ => ExitStatus::Malformed,
            };
            ExitCode::from(status.code() as u8)
        }
    }
}
