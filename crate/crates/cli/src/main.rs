mod args;
mod checks;
mod commands;
mod output;
mod plot;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use output::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_pool() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Sizes the global worker pool from `BOOTH_GFT_THREADS` when set.
fn init_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var("BOOTH_GFT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("BOOTH_GFT_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}
