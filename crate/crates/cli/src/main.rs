use std::process::ExitCode;

use allgenus::commands::{out_path, run, Command};
use allgenus::output::emit;
use clap::Parser;

/// Exact enumeration and uniform sampling of rooted maps of any genus.
#[derive(Debug, Parser)]
#[command(name = "allgenus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|outcome| {
        emit(&outcome.text, out_path(&cli.command).map(|p| p.as_path()))?;
        outcome.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("allgenus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
