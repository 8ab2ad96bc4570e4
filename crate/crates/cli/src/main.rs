//! `qrd`: command-line front end for the quantum Rabi dimer laboratory.
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 refusal in the unstable
//! region, 4 numerical non-convergence.

mod args;
mod commands;
mod config;
mod error;
mod output;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run() -> Result<(), CliError> {
    let argv = config::expand_args(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let jobs = cli.command.common().jobs;
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    match &cli.command {
        Command::Bogoliubov(a) => commands::bogoliubov(a),
        Command::PhaseDiagram(a) => commands::phase_diagram(a),
        Command::Scaling(a) => commands::scaling(a),
        Command::ChainModes(a) => commands::chain_modes_cmd(a),
        Command::Ed(a) => commands::ed(a),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
