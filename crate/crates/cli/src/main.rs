//! `knn-sweep`: command-line driver for the KNN regression library.
//!
//! Exit status: 0 on success, 1 on any data or model error (one-line
//! diagnostic on standard error), 2 on malformed flags.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match cli.command {
        Command::Sweep(a) => commands::sweep(a),
        Command::Eval(a) => commands::eval(a),
        Command::Predict(a) => commands::predict(a),
        Command::Density(a) => commands::density(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("knn-sweep: error: {e:#}");
            ExitCode::from(1)
        }
    }
}
