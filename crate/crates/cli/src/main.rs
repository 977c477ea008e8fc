use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use ria_cli::table::write_tables;
use ria_cli::{execute, Cli, UsageError};

fn run(cli: &Cli) -> anyhow::Result<()> {
    let (tables, output) = execute(cli)?;
    match output {
        Some(path) => {
            let file = File::create(&path).map_err(|e| anyhow::anyhow!("cannot create {}: {e}", path.display()))?;
            write_tables(&tables, BufWriter::new(file))
        }
        None => write_tables(&tables, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if err.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
