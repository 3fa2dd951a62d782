//! `bellsim`: command-line front end for the bell-core toolkit.
//!
//! Exit status: 0 success, 1 usage or configuration error, 2 malformed
//! input data, 3 internal invariant breach.

mod args;
mod commands;
mod config;
mod error;
mod output;
mod streamfile;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::VerifyIdentity(a) => commands::verify_identity(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Scan(a) => commands::scan(a),
        Command::Streams(a) => commands::streams(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
