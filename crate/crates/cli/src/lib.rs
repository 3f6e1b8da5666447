//! Command-line front end for the `gesture-pointer` library.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod planefile;
pub mod session;

use std::ffi::OsString;

use clap::Parser;

use args::Cli;
use config::{ConfigFile, Settings};
use error::CliResult;

pub fn run(cli: &Cli) -> CliResult<()> {
    let file = ConfigFile::from_env()?;
    let settings = Settings::resolve(&cli.global, &file)?;
    commands::dispatch(&cli.command, &settings)
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
