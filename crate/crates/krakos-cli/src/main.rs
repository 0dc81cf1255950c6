use std::time::Instant;

use clap::Parser;

mod cli;
mod gatespec;
mod report;
mod run;

fn main() {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let parsed = cli::Cli::parse();
    let code = match run::dispatch(parsed, &argv, started) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}
