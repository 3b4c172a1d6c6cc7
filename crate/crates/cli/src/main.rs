mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli.global, &cli.command).and_then(|out| match &cli.global.output {
        Some(path) => fs::write(path, out).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .write_all(out.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
