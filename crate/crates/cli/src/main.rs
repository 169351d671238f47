//! `qbm`: batch front end for the Gaussian quantum Brownian motion model.
//!
//! All results go to files under `--out`; progress and errors go to stderr.
//! Exit status: 0 success, 2 invalid input, 3 solver diagnostic failure.

mod commands;
mod config;
mod error;
mod figures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Params;
use crate::error::CliResult;
use crate::output::OutDir;

#[derive(Parser)]
#[command(name = "qbm", version, about = "Gaussian-state dynamics, entropy production and D_xx selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` file; `#` starts a comment.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override or add a key, e.g. `--set gamma=2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a state: evolve.csv with tau,c1..c6,nbar.
    Evolve(Common),
    /// Relative entropy to the steady state along a trajectory.
    RelEntropy(Common),
    /// Entropy production over a grid of D'xx.
    SigmaScan(Common),
    /// Select D'xx by extremizing the entropy production.
    SolveDxx(Common),
    /// Spectrum and position-space eigenpairs of a state.
    Spectrum(Common),
    /// Curve data and a gnuplot script for reference figure N (1..10).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=10))]
        n: u8,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    let (common, figure) = match &cli.command {
        Command::Figure { n, common } => (common, Some(*n)),
        Command::Evolve(c)
        | Command::RelEntropy(c)
        | Command::SigmaScan(c)
        | Command::SolveDxx(c)
        | Command::Spectrum(c) => (c, None),
    };
    let params = Params::load(common.config.as_deref(), &common.sets)?;
    if let Some(n) = figure {
        let fig = figures::build(n, &params)?;
        params.finish()?;
        let out = OutDir::create(&common.out)?;
        return fig.emit(&out);
    }
    let out = OutDir::create(&common.out)?;
    match cli.command {
        Command::Evolve(_) => commands::evolve(&params, &out),
        Command::RelEntropy(_) => commands::rel_entropy(&params, &out),
        Command::SigmaScan(_) => commands::sigma_scan(&params, &out),
        Command::SolveDxx(_) => commands::solve_dxx(&params, &out),
        Command::Spectrum(_) => commands::spectrum(&params, &out),
        Command::Figure { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
